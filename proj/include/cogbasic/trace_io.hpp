#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cogbasic/interpreter.hpp"
#include "cogbasic/memory.hpp"

namespace cogbasic {

/// One step as claimed by a trace producer (a model or the interpreter).
struct ModelTraceEntry {
  LineNumber line = 0;
  std::string instruction;
  std::string rationale;
  std::optional<NextLine> next;         // nullopt when no NEXT was given
  std::optional<MemoryState> memory;    // nullopt when no parseable snapshot was given
};

struct ModelTrace {
  std::vector<ModelTraceEntry> entries;  // in emitted order
  MemoryState final_memory;
  std::string raw;
};

/// Parses the human-readable trace format (LINE / RATIONALE / MEMORY / NEXT
/// blocks followed by FINAL MEMORY). Tolerates surrounding prose, markdown
/// fences and unknown lines. Throws TraceParseError, keeping the raw text, when
/// there is no parseable FINAL MEMORY block.
ModelTrace parse_model_trace(std::string_view text);

/// Machine-readable trace: one JSON object per line with fields line,
/// instruction, rationale, memory, next; then a terminal object with outcome
/// and memory (the final state).
std::string write_trace_jsonl(const RunResult& result);

/// Reads write_trace_jsonl output back. Throws TraceParseError on malformed records.
ModelTrace read_trace_jsonl(std::string_view text);

/// Reads either format, choosing JSON lines when the first non-blank character is '{'.
ModelTrace read_trace(std::string_view text);

ModelTrace to_model_trace(const RunResult& result);

}  // namespace cogbasic
