#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cogbasic/ast.hpp"
#include "cogbasic/memory.hpp"
#include "cogbasic/provider.hpp"

namespace cogbasic {

/// Line executed next; nullopt means END.
using NextLine = std::optional<LineNumber>;

std::string format_next(const NextLine& next);

constexpr std::size_t kDefaultStepLimit = 1000;

struct RunLimits {
  std::size_t step_limit = kDefaultStepLimit;
};

enum class Status { Running, Ended, Failed };

struct TraceEntry {
  LineNumber line = 0;
  std::string instruction;  // canonical statement text
  std::string rationale;
  MemoryState memory;       // after the statement took effect
  NextLine next;
  std::optional<std::string> output;  // PRINT only

  bool operator==(const TraceEntry&) const = default;
};

enum class Outcome { Completed, StepLimitExceeded, RuntimeError };

std::string_view to_string(Outcome outcome);

struct RunResult {
  MemoryState final_memory;
  std::vector<TraceEntry> trace;
  std::vector<std::string> print_output;
  Outcome outcome = Outcome::Completed;
  std::string detail;  // runtime error message

  bool operator==(const RunResult&) const = default;
};

/// One program execution. Owns its memory and bindings; the program must
/// outlive the state.
class ExecutionState {
 public:
  ExecutionState(const Program& program, std::string scenario, RunLimits limits = {});

  const Program& program() const { return *program_; }
  const MemoryState& memory() const { return memory_; }
  MemoryState& memory() { return memory_; }
  const Environment& env() const { return env_; }
  Environment& env() { return env_; }
  const std::string& scenario() const { return scenario_; }
  LineNumber current_line() const { return current_line_; }
  std::size_t steps_taken() const { return steps_taken_; }
  const RunLimits& limits() const { return limits_; }
  Status status() const { return status_; }
  const std::string& failure() const { return failure_; }

 private:
  friend TraceEntry step(ExecutionState& state, const CognitiveOps& provider);

  const Program* program_;
  std::string scenario_;
  RunLimits limits_;
  MemoryState memory_;
  Environment env_;
  LineNumber current_line_ = 0;
  std::size_t steps_taken_ = 0;
  Status status_ = Status::Running;
  std::string failure_;
};

/// Executes the statement at the current line and returns its trace entry.
/// Throws RuntimeError (and marks the state failed) when the statement cannot
/// complete; no entry is produced in that case. Falling past the last line
/// without END produces the entry and then marks the state failed.
TraceEntry step(ExecutionState& state, const CognitiveOps& provider);

/// Evaluates an expression at the current line. RESOLVE_CONFLICTS updates
/// memory as a side effect; DETECT_CONFLICTS does not.
Value eval_expression(const Expression& expr, ExecutionState& state, const CognitiveOps& provider);

/// DETECT_CONFLICTS() / RESOLVE_CONFLICTS() in statement position; both write memory.
void execute_call_statement(const BuiltinCall& call, ExecutionState& state, const CognitiveOps& provider);

RunResult run(const Program& program, std::string_view scenario, const CognitiveOps& provider,
              RunLimits limits = {});

/// Human-readable block for one entry (LINE, RATIONALE, OUTPUT, MEMORY, NEXT).
std::string render_entry(const TraceEntry& entry);
/// All entries followed by the FINAL MEMORY block.
std::string render_trace(const RunResult& result);

}  // namespace cogbasic
