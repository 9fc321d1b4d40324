#include "cogbasic/trace_io.hpp"

#include <json.hpp>

#include "cogbasic/errors.hpp"
#include "text_util.hpp"

namespace cogbasic {

namespace {

using json = nlohmann::json;

// Drops markdown emphasis and heading/quote markers so "**LINE 10:**" and
// "### FINAL MEMORY" are recognized.
std::string clean_line(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '*' && i + 1 < line.size() && line[i + 1] == '*') {
      ++i;
      continue;
    }
    out.push_back(line[i]);
  }
  std::string_view view = detail::trim(out);
  while (!view.empty() && (view.front() == '#' || view.front() == '>')) {
    view.remove_prefix(1);
  }
  return std::string(detail::trim(view));
}

// "KEY: value" with a case-insensitive key; returns the trimmed value.
std::optional<std::string> keyed(std::string_view line, std::string_view key) {
  if (line.size() < key.size() + 1) {
    return std::nullopt;
  }
  if (detail::to_lower(line.substr(0, key.size())) != detail::to_lower(key) || line[key.size()] != ':') {
    return std::nullopt;
  }
  return std::string(detail::trim(line.substr(key.size() + 1)));
}

std::optional<LineNumber> parse_positive(std::string_view text) {
  if (text.empty() || text.size() > 18) {
    return std::nullopt;
  }
  LineNumber value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') {
      return std::nullopt;
    }
    value = value * 10 + (c - '0');
  }
  return value > 0 ? std::optional<LineNumber>(value) : std::nullopt;
}

// "LINE 70: IF ..." / "Line 70 - IF ..." / "LINE 70"
std::optional<std::pair<LineNumber, std::string>> line_header(std::string_view line) {
  if (line.size() < 5 || detail::to_lower(line.substr(0, 4)) != "line" || line[4] != ' ') {
    return std::nullopt;
  }
  std::string_view rest = detail::trim(line.substr(5));
  std::size_t digits = 0;
  while (digits < rest.size() && rest[digits] >= '0' && rest[digits] <= '9') {
    ++digits;
  }
  auto number = parse_positive(rest.substr(0, digits));
  if (!number) {
    return std::nullopt;
  }
  rest = detail::trim(rest.substr(digits));
  if (!rest.empty() && (rest.front() == ':' || rest.front() == '-')) {
    rest = detail::trim(rest.substr(1));
  }
  return std::make_pair(*number, std::string(rest));
}

std::optional<NextLine> parse_next(std::string_view value) {
  std::string lowered = detail::to_lower(detail::trim(value));
  while (!lowered.empty() && (lowered.back() == '.' || lowered.back() == '*')) {
    lowered.pop_back();
  }
  if (lowered == "end") {
    return NextLine{};
  }
  if (auto line = parse_positive(lowered)) {
    return NextLine{*line};
  }
  return std::nullopt;
}

bool is_final_header(const std::string& cleaned) {
  const auto lowered = detail::to_lower(cleaned);
  return lowered == "final memory" || lowered == "final memory:";
}

json memory_to_json(const MemoryState& memory) {
  json conflicts = json::array();
  for (const auto& pair : memory.conflicts) {
    conflicts.push_back(serialize_pair(pair));
  }
  return json{{"working", memory.working},
              {"declarative", memory.declarative},
              {"procedural", memory.procedural},
              {"conflicts", conflicts},
              {"resolution", memory.resolution}};
}

MemoryState memory_from_json(const json& j) {
  MemoryState memory;
  memory.working = j.at("working").get<std::string>();
  memory.declarative = j.at("declarative").get<std::vector<std::string>>();
  memory.procedural = j.at("procedural").get<std::vector<std::string>>();
  for (const auto& pair : j.at("conflicts")) {
    memory.conflicts.push_back(parse_pair(pair.get<std::string>()));
  }
  memory.resolution = j.at("resolution").get<std::string>();
  return memory;
}

}  // namespace

ModelTrace parse_model_trace(std::string_view text) {
  ModelTrace trace;
  trace.raw = std::string(text);
  const auto lines = detail::split_lines(text);

  std::size_t final_index = lines.size();
  for (std::size_t i = lines.size(); i-- > 0;) {
    if (is_final_header(clean_line(lines[i]))) {
      final_index = i;
      break;
    }
  }
  if (final_index == lines.size()) {
    throw TraceParseError("no FINAL MEMORY block found in the trace", trace.raw);
  }
  std::size_t pos = final_index + 1;
  auto final_memory = parse_memory_fields(lines, pos);
  if (!final_memory) {
    throw TraceParseError("FINAL MEMORY block does not match the memory grammar", trace.raw);
  }
  trace.final_memory = std::move(*final_memory);

  ModelTraceEntry* current = nullptr;
  for (std::size_t i = 0; i < final_index; ++i) {
    const std::string cleaned = clean_line(lines[i]);
    if (auto header = line_header(cleaned)) {
      trace.entries.push_back(ModelTraceEntry{header->first, header->second, {}, std::nullopt, std::nullopt});
      current = &trace.entries.back();
      continue;
    }
    if (!current) {
      continue;
    }
    if (auto rationale = keyed(cleaned, "RATIONALE")) {
      current->rationale = *rationale;
    } else if (auto next = keyed(cleaned, "NEXT")) {
      current->next = parse_next(*next);
    } else if (keyed(cleaned, "MEMORY")) {
      std::size_t cursor = i + 1;
      if (auto memory = parse_memory_fields(lines, cursor)) {
        current->memory = std::move(*memory);
        i = cursor - 1;
      }
    }
  }
  return trace;
}

std::string write_trace_jsonl(const RunResult& result) {
  std::string out;
  for (const auto& entry : result.trace) {
    json record{{"line", entry.line},
                {"instruction", entry.instruction},
                {"rationale", entry.rationale},
                {"memory", memory_to_json(entry.memory)}};
    record["next"] = entry.next ? json(*entry.next) : json("END");
    out += record.dump();
    out += '\n';
  }
  std::string outcome(to_string(result.outcome));
  if (!result.detail.empty()) {
    outcome += ": " + result.detail;
  }
  json terminal{{"outcome", outcome}, {"memory", memory_to_json(result.final_memory)}};
  out += terminal.dump();
  out += '\n';
  return out;
}

ModelTrace read_trace_jsonl(std::string_view text) {
  ModelTrace trace;
  trace.raw = std::string(text);
  bool terminal = false;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = detail::trim(lines[i]);
    if (line.empty()) {
      continue;
    }
    try {
      const json record = json::parse(line);
      if (record.contains("outcome")) {
        trace.final_memory = memory_from_json(record.at("memory"));
        terminal = true;
        continue;
      }
      ModelTraceEntry entry;
      entry.line = record.at("line").get<LineNumber>();
      entry.instruction = record.value("instruction", "");
      entry.rationale = record.value("rationale", "");
      if (record.contains("memory")) {
        entry.memory = memory_from_json(record.at("memory"));
      }
      if (record.contains("next")) {
        const auto& next = record.at("next");
        if (next.is_string()) {
          entry.next = parse_next(next.get<std::string>());
        } else {
          entry.next = NextLine{next.get<LineNumber>()};
        }
      }
      trace.entries.push_back(std::move(entry));
    } catch (const json::exception& e) {
      throw TraceParseError("trace record " + std::to_string(i + 1) + ": " + e.what(), trace.raw);
    } catch (const PairFormatError& e) {
      throw TraceParseError("trace record " + std::to_string(i + 1) + ": " + e.what(), trace.raw);
    }
  }
  if (!terminal) {
    throw TraceParseError("trace has no terminal outcome record", trace.raw);
  }
  return trace;
}

ModelTrace read_trace(std::string_view text) {
  const auto body = detail::trim(text);
  if (!body.empty() && body.front() == '{') {
    return read_trace_jsonl(text);
  }
  return parse_model_trace(text);
}

ModelTrace to_model_trace(const RunResult& result) {
  ModelTrace trace;
  for (const auto& entry : result.trace) {
    trace.entries.push_back(ModelTraceEntry{entry.line, entry.instruction, entry.rationale, entry.next, entry.memory});
  }
  trace.final_memory = result.final_memory;
  trace.raw = render_trace(result);
  return trace;
}

}  // namespace cogbasic
