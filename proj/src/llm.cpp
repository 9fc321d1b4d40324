#include "cogbasic/llm.hpp"

#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "cogbasic/errors.hpp"
#include "cogbasic/parser.hpp"
#include "text_util.hpp"

namespace cogbasic {

namespace {

using json = nlohmann::json;

struct UrlParts {
  std::string origin;  // scheme://host[:port]
  std::string path;    // without trailing slash, may be empty
};

std::optional<UrlParts> split_url(std::string_view url) {
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    return std::nullopt;
  }
  const auto scheme = detail::to_lower(url.substr(0, scheme_end));
  if (scheme != "http" && scheme != "https") {
    return std::nullopt;
  }
  const std::size_t host_start = scheme_end + 3;
  std::size_t path_start = url.find('/', host_start);
  if (path_start == std::string_view::npos) {
    path_start = url.size();
  }
  if (path_start == host_start) {
    return std::nullopt;
  }
  UrlParts parts{std::string(url.substr(0, path_start)), std::string(url.substr(path_start))};
  while (!parts.path.empty() && parts.path.back() == '/') {
    parts.path.pop_back();
  }
  return parts;
}

std::string excerpt(std::string_view text, std::size_t limit = 200) {
  if (text.size() <= limit) {
    return std::string(text);
  }
  return std::string(text.substr(0, limit)) + "...";
}

std::vector<std::string> content_lines(std::string_view reply) {
  std::vector<std::string> out;
  for (const auto& line : detail::split_lines(reply)) {
    const auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.substr(0, 3) == "```") {
      continue;
    }
    out.emplace_back(trimmed);
  }
  return out;
}

bool is_none(const std::vector<std::string>& lines) {
  if (lines.size() != 1) {
    return false;
  }
  auto word = detail::to_lower(lines.front());
  while (!word.empty() && (word.back() == '.' || word.back() == '*')) {
    word.pop_back();
  }
  return word == "none" || word == "- none";
}

std::string numbered(std::span<const std::string> items) {
  std::string out;
  for (const auto& item : items) {
    out += "- " + single_line(item) + "\n";
  }
  return out;
}

constexpr std::string_view kExtractDeclarativeSystem =
    "You extract declarative knowledge: factual statements about what is true. "
    "Copy each factual sentence from the text as written. Leave out instructions, steps and rules for acting.";

constexpr std::string_view kExtractProceduralSystem =
    "You extract procedural knowledge: instructions, steps and rules about how to act or reason. "
    "Copy each such sentence from the text as written. Leave out plain statements of fact.";

constexpr std::string_view kBulletShape =
    "Reply with one item per line, each line starting with \"- \". "
    "Reply with the single word NONE if there are no items. Write nothing else.";

constexpr std::string_view kDetectSystem =
    "You identify contradictions between stored facts. Two facts conflict when they cannot both be fully true: "
    "an absolute claim against a qualified one (always versus sometimes), a statement against its negation, "
    "or different values for the same attribute (opens at 9 versus opens at 10).";

constexpr std::string_view kPairShape =
    "Reply with one conflict per line in the form \"<fact A> || <fact B>\", copying both facts exactly. "
    "Reply with the single word NONE if there are no conflicts. Write nothing else.";

constexpr std::string_view kResolveSystem =
    "You resolve contradictions between stored facts by writing a reconciled statement that keeps what both "
    "sides support, for example \"usually true but sometimes false\" or \"uncertain between 9 and 10\".";

constexpr std::string_view kParagraphShape =
    "Reply with a single paragraph containing the reconciled statement. No lists, no headings, nothing else.";

}  // namespace

void EndpointConfig::validate() const {
  if (!split_url(base_url)) {
    throw Error("endpoint URL must look like http(s)://host[:port][/path], got '" + base_url + "'");
  }
  if (model.empty()) {
    throw Error("no model name configured");
  }
  if (!(temperature >= 0.0)) {
    throw Error("temperature must be >= 0");
  }
  if (timeout.count() <= 0) {
    throw Error("timeout must be positive");
  }
  if (max_retries < 0) {
    throw Error("max_retries must be >= 0");
  }
  if (max_in_flight == 0) {
    throw Error("max_in_flight must be at least 1");
  }
}

void apply_environment(EndpointConfig& config) {
  const auto fill = [](std::string& field, const char* name) {
    if (field.empty()) {
      if (const char* value = std::getenv(name)) {
        field = value;
      }
    }
  };
  fill(config.base_url, "COGBASIC_LLM_URL");
  fill(config.model, "COGBASIC_LLM_MODEL");
  fill(config.api_key, "COGBASIC_LLM_KEY");
}

std::string build_request_body(const EndpointConfig& config, const std::vector<ChatMessage>& messages) {
  json body;
  body["model"] = config.model;
  body["messages"] = json::array();
  for (const auto& message : messages) {
    body["messages"].push_back(json{{"role", message.role}, {"content", message.content}});
  }
  body["temperature"] = config.temperature;
  return body.dump();
}

std::string llm_chat(const EndpointConfig& config, const std::vector<ChatMessage>& messages, const LlmLog& log) {
  config.validate();
  const auto url = *split_url(config.base_url);
  const std::string path = url.path + "/chat/completions";
  const std::string body = build_request_body(config, messages);
  if (log && !messages.empty()) {
    log("prompt: " + excerpt(single_line(messages.back().content), 400));
  }

  httplib::Headers headers;
  if (!config.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config.api_key);
  }

  const int attempts_allowed = config.max_retries + 1;
  for (int attempt = 1;; ++attempt) {
    httplib::Client client(url.origin);
    client.set_connection_timeout(config.timeout);
    client.set_read_timeout(config.timeout);
    client.set_write_timeout(config.timeout);

    const auto started = std::chrono::steady_clock::now();
    auto result = client.Post(path, headers, body, "application/json");
    const auto elapsed = std::chrono::steady_clock::now() - started;
    const bool last = attempt >= attempts_allowed;

    if (!result) {
      const auto error = result.error();
      const bool timed_out = error == httplib::Error::ConnectionTimeout ||
                             (error == httplib::Error::Read && elapsed >= config.timeout);
      if (last) {
        const std::string what = "request to " + url.origin + path + " failed after " + std::to_string(attempt) +
                                 " attempt(s): " + httplib::to_string(error);
        if (timed_out) {
          throw TimeoutError(what, attempt);
        }
        throw TransportError(what, attempt);
      }
    } else if (result->status >= 500) {
      if (last) {
        throw ApiError(result->status, result->body, attempt);
      }
    } else if (result->status < 200 || result->status >= 300) {
      throw ApiError(result->status, result->body, attempt);
    } else {
      try {
        const json reply = json::parse(result->body);
        std::string content = reply.at("choices").at(0).at("message").at("content").get<std::string>();
        if (log) {
          log("reply: " + excerpt(single_line(content), 400));
        }
        return content;
      } catch (const json::exception& e) {
        throw ApiError(result->status, "unreadable completion (" + std::string(e.what()) + "): " + result->body,
                       attempt);
      }
    }
    std::this_thread::sleep_for(config.retry_base * (1LL << (attempt - 1)));
  }
}

std::string llm_call(const EndpointConfig& config, std::string_view system_prompt, std::string_view user_prompt,
                     const LlmLog& log) {
  return llm_chat(config, {{"system", std::string(system_prompt)}, {"user", std::string(user_prompt)}}, log);
}

std::vector<std::string> parse_bullet_reply(std::string_view reply) {
  const auto lines = content_lines(reply);
  std::vector<std::string> items;
  if (lines.empty() || is_none(lines)) {
    return items;
  }
  for (const auto& line : lines) {
    if (line.size() < 2 || line[0] != '-' || line[1] != ' ') {
      throw OutputFormatError("expected a \"- \" bullet, got: " + excerpt(line, 80), std::string(reply));
    }
    auto item = detail::trim(std::string_view(line).substr(2));
    if (!item.empty()) {
      items.emplace_back(item);
    }
  }
  return items;
}

std::vector<ConflictPair> parse_pairs_reply(std::string_view reply) {
  const auto lines = content_lines(reply);
  std::vector<ConflictPair> pairs;
  if (lines.empty() || is_none(lines)) {
    return pairs;
  }
  for (const auto& line : lines) {
    std::string_view body = line;
    if (body.size() >= 2 && body[0] == '-' && body[1] == ' ') {
      body = detail::trim(body.substr(2));
    }
    try {
      pairs.push_back(parse_pair(body));
    } catch (const PairFormatError& e) {
      throw OutputFormatError(e.what(), std::string(reply));
    }
  }
  return pairs;
}

std::string parse_paragraph_reply(std::string_view reply) {
  const auto lines = content_lines(reply);
  if (lines.empty()) {
    throw OutputFormatError("empty reply where a paragraph was expected", std::string(reply));
  }
  bool seen_text = false;
  bool gap = false;
  for (const auto& line : detail::split_lines(reply)) {
    const auto trimmed = detail::trim(line);
    if (trimmed.substr(0, 3) == "```") {
      continue;
    }
    if (trimmed.empty()) {
      gap = seen_text;
      continue;
    }
    if (gap) {
      throw OutputFormatError("expected a single paragraph, got several", std::string(reply));
    }
    if (trimmed.front() == '-' || trimmed.front() == '#' || trimmed.find("||") != std::string_view::npos) {
      throw OutputFormatError("expected plain prose, got: " + excerpt(trimmed, 80), std::string(reply));
    }
    seen_text = true;
  }
  std::string joined;
  for (const auto& line : lines) {
    joined += line + " ";
  }
  return normalize_whitespace(joined);
}

struct LlmProvider::Gate {
  explicit Gate(std::size_t capacity) : free(capacity) {}
  std::mutex mutex;
  std::condition_variable cv;
  std::size_t free;
};

LlmProvider::LlmProvider(EndpointConfig config, LlmLog log)
    : config_(std::move(config)), log_(std::move(log)), gate_(std::make_shared<Gate>(config_.max_in_flight)) {
  config_.validate();
}

std::string LlmProvider::chat(const std::vector<ChatMessage>& messages) const {
  {
    std::unique_lock lock(gate_->mutex);
    gate_->cv.wait(lock, [&] { return gate_->free > 0; });
    --gate_->free;
  }
  struct Release {
    Gate& gate;
    ~Release() {
      {
        std::lock_guard lock(gate.mutex);
        ++gate.free;
      }
      gate.cv.notify_one();
    }
  } release{*gate_};
  return llm_chat(config_, messages, log_);
}

template <typename Parse>
auto LlmProvider::ask(std::string_view system_prompt, const std::string& user_prompt, std::string_view shape,
                      Parse parse) const -> decltype(parse(std::string_view{})) {
  std::vector<ChatMessage> messages{{"system", std::string(system_prompt) + "\n\n" + std::string(shape)},
                                    {"user", user_prompt}};
  const std::string first = chat(messages);
  try {
    return parse(first);
  } catch (const OutputFormatError& e) {
    if (log_) {
      log_("reply rejected (" + std::string(e.what()) + "); asking for a reformat");
    }
    messages.push_back({"assistant", first});
    messages.push_back({"user", "Your reply did not follow the required format (" + std::string(e.what()) +
                                    "). Answer again. " + std::string(shape)});
  }
  const std::string second = chat(messages);
  try {
    return parse(second);
  } catch (const OutputFormatError& e) {
    throw OutputFormatError(std::string(e.what()) + " (after one reformat request)", second);
  }
}

std::vector<std::string> LlmProvider::extract_declarative(std::string_view text) const {
  return ask(kExtractDeclarativeSystem, "Text:\n" + std::string(text), kBulletShape, parse_bullet_reply);
}

std::vector<std::string> LlmProvider::extract_procedural(std::string_view text) const {
  return ask(kExtractProceduralSystem, "Text:\n" + std::string(text), kBulletShape, parse_bullet_reply);
}

std::vector<ConflictPair> LlmProvider::detect_conflicts(std::span<const std::string> facts) const {
  if (facts.size() < 2) {
    return {};
  }
  return ask(kDetectSystem, "Facts:\n" + numbered(facts), kPairShape, parse_pairs_reply);
}

Resolution LlmProvider::resolve_conflicts(std::span<const ConflictPair> pairs) const {
  if (pairs.empty()) {
    throw EmptyInput("resolve_conflicts needs at least one conflict pair");
  }
  std::string prompt = "Conflicts:\n";
  for (const auto& pair : pairs) {
    prompt += "- " + single_line(serialize_pair(pair)) + "\n";
  }
  const std::string paragraph = ask(kResolveSystem, prompt, kParagraphShape, parse_paragraph_reply);
  Resolution resolution;
  for (const auto& pair : pairs) {
    resolution.reconciled.push_back(Reconciled{pair, paragraph});
  }
  resolution.summary = paragraph;
  return resolution;
}

std::string build_in_model_prompt(const Program& program, std::string_view scenario) {
  std::string prompt = "PROGRAM:\n";
  prompt += format_program(program);
  prompt += "\n\nSCENARIO:\n";
  prompt += scenario;
  prompt +=
      "\n\nExecute the program on the scenario following the interpreter file. Log every executed line in the "
      "trace format, then finish with the FINAL MEMORY block.";
  return prompt;
}

ModelTrace run_in_model(const EndpointConfig& config, std::string_view interpreter_file, const Program& program,
                        std::string_view scenario, const LlmLog& log) {
  const std::string reply = llm_call(config, interpreter_file, build_in_model_prompt(program, scenario), log);
  return parse_model_trace(reply);
}

}  // namespace cogbasic
