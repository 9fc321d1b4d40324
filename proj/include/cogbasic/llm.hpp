#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cogbasic/ast.hpp"
#include "cogbasic/provider.hpp"
#include "cogbasic/trace_io.hpp"

namespace cogbasic {

/// OpenAI-compatible chat-completions endpoint.
struct EndpointConfig {
  std::string base_url;  // e.g. http://localhost:11434/v1
  std::string model;
  std::string api_key;   // empty: no Authorization header
  double temperature = 0.0;
  std::chrono::milliseconds timeout{120000};
  int max_retries = 3;
  std::chrono::milliseconds retry_base{1000};  // backoff before retry k is retry_base * 2^k
  std::size_t max_in_flight = 4;

  /// Throws Error when a field is out of range or base_url is not http(s)://host[:port][/path].
  void validate() const;
};

/// Fills base_url, model and api_key from COGBASIC_LLM_URL, COGBASIC_LLM_MODEL
/// and COGBASIC_LLM_KEY, leaving fields already set untouched.
void apply_environment(EndpointConfig& config);

struct ChatMessage {
  std::string role;  // system, user or assistant
  std::string content;
};

/// Request body: exactly {model, messages, temperature}. Deterministic for equal inputs.
std::string build_request_body(const EndpointConfig& config, const std::vector<ChatMessage>& messages);

/// Receives prompt and reply excerpts when set (verbosity 2).
using LlmLog = std::function<void(std::string_view)>;

/// One chat completion. Retries transport failures, timeouts and 5xx replies
/// with exponential backoff, up to max_retries times. Throws TransportError,
/// TimeoutError or ApiError carrying the attempt count.
std::string llm_chat(const EndpointConfig& config, const std::vector<ChatMessage>& messages, const LlmLog& log = {});
std::string llm_call(const EndpointConfig& config, std::string_view system_prompt, std::string_view user_prompt,
                     const LlmLog& log = {});

// Reply shape parsers used by LlmProvider. Each throws OutputFormatError
// (raw reply attached) when the reply does not have the demanded shape.

/// "- item" lines; "NONE" or an empty reply is an empty list.
std::vector<std::string> parse_bullet_reply(std::string_view reply);
/// "A || B" lines, optionally bulleted; "NONE" or empty is an empty list.
std::vector<ConflictPair> parse_pairs_reply(std::string_view reply);
/// A single non-empty paragraph, returned whitespace-collapsed.
std::string parse_paragraph_reply(std::string_view reply);

/// Cognitive builtins answered by a model, one completion per call.
/// Safe for concurrent use; at most config.max_in_flight requests run at once.
class LlmProvider final : public CognitiveOps {
 public:
  explicit LlmProvider(EndpointConfig config, LlmLog log = {});

  std::vector<std::string> extract_declarative(std::string_view text) const override;
  std::vector<std::string> extract_procedural(std::string_view text) const override;
  std::vector<ConflictPair> detect_conflicts(std::span<const std::string> facts) const override;
  /// The model writes one paragraph; it becomes the summary and the merged
  /// statement of every pair.
  Resolution resolve_conflicts(std::span<const ConflictPair> pairs) const override;

  const EndpointConfig& config() const { return config_; }

 private:
  template <typename Parse>
  auto ask(std::string_view system_prompt, const std::string& user_prompt, std::string_view shape,
           Parse parse) const -> decltype(parse(std::string_view{}));

  std::string chat(const std::vector<ChatMessage>& messages) const;

  EndpointConfig config_;
  LlmLog log_;
  struct Gate;
  std::shared_ptr<Gate> gate_;
};

/// User prompt for in-model execution: canonical program text and scenario.
std::string build_in_model_prompt(const Program& program, std::string_view scenario);

/// Sends the interpreter file as the system prompt and asks the model to
/// execute the whole program. Throws TraceParseError when the reply has no
/// FINAL MEMORY block.
ModelTrace run_in_model(const EndpointConfig& config, std::string_view interpreter_file, const Program& program,
                        std::string_view scenario, const LlmLog& log = {});

}  // namespace cogbasic
