#include "cogbasic/memory.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <utility>

#include "cogbasic/errors.hpp"
#include "text_util.hpp"

namespace cogbasic {

namespace {

constexpr std::string_view kSeparator = "||";

constexpr std::array<std::pair<ConflictCategory, std::string_view>, 4> kCategoryNames = {{
    {ConflictCategory::AbsoluteQualified, "absolute-qualified"},
    {ConflictCategory::Negation, "negation"},
    {ConflictCategory::NumericCategorical, "numeric-categorical"},
    {ConflictCategory::Unclassified, "unclassified"},
}};

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

std::string_view trim_view(std::string_view text) {
  while (!text.empty() && is_blank(text.front())) {
    text.remove_prefix(1);
  }
  while (!text.empty() && is_blank(text.back())) {
    text.remove_suffix(1);
  }
  return text;
}

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

bool same_pair(const ConflictPair& x, const ConflictPair& y) {
  const auto xa = normalize_whitespace(x.a());
  const auto xb = normalize_whitespace(x.b());
  const auto ya = normalize_whitespace(y.a());
  const auto yb = normalize_whitespace(y.b());
  return (xa == ya && xb == yb) || (xa == yb && xb == ya);
}

AddOutcome append_strings(std::vector<std::string>& target, const StringList& values) {
  AddOutcome outcome;
  for (const auto& raw : values) {
    std::string value(trim_view(raw));
    if (value.empty()) {
      continue;
    }
    const auto key = normalize_whitespace(value);
    const bool present = std::any_of(target.begin(), target.end(),
                                     [&](const std::string& existing) { return normalize_whitespace(existing) == key; });
    if (present) {
      ++outcome.duplicates;
    } else {
      target.push_back(std::move(value));
      ++outcome.appended;
    }
  }
  return outcome;
}

std::string header_line(std::string_view name, std::string_view value) {
  std::string line(name);
  line += ':';
  if (!value.empty()) {
    line += ' ';
    line += single_line(value);
  }
  return line;
}

// Matches "name:" or "name: value" and returns the value.
std::optional<std::string> match_header(std::string_view line, std::string_view name) {
  line = trim_view(line);
  if (line.size() < name.size() + 1 || line.substr(0, name.size()) != name || line[name.size()] != ':') {
    return std::nullopt;
  }
  return unescape_single_line(trim_view(line.substr(name.size() + 1)));
}

std::optional<std::string> match_item(std::string_view line) {
  line = trim_view(line);
  if (line.empty() || line.front() != '-') {
    return std::nullopt;
  }
  return unescape_single_line(trim_view(line.substr(1)));
}

void skip_blank_lines(const std::vector<std::string>& lines, std::size_t& pos) {
  while (pos < lines.size() && trim_view(lines[pos]).empty()) {
    ++pos;
  }
}

}  // namespace

std::string_view to_string(ConflictCategory category) {
  for (const auto& [value, name] : kCategoryNames) {
    if (value == category) {
      return name;
    }
  }
  return "unclassified";
}

std::optional<ConflictCategory> conflict_category_from_name(std::string_view name) {
  for (const auto& [value, text] : kCategoryNames) {
    if (text == name) {
      return value;
    }
  }
  return std::nullopt;
}

ConflictPair::ConflictPair(std::string a, std::string b, ConflictCategory category)
    : a_(std::move(a)), b_(std::move(b)), category_(category) {
  if (a_.empty() || b_.empty()) {
    throw PairFormatError("conflict pair sides must be non-empty");
  }
  if (a_ == b_) {
    throw PairFormatError("conflict pair sides must differ: '" + a_ + "'");
  }
  if (a_.find(kSeparator) != std::string::npos || b_.find(kSeparator) != std::string::npos) {
    throw PairFormatError("conflict pair sides may not contain '||'");
  }
}

std::string serialize_pair(const ConflictPair& pair) { return pair.a() + " || " + pair.b(); }

ConflictPair parse_pair(std::string_view text) {
  const std::size_t separators = count_occurrences(text, kSeparator);
  if (separators != 1) {
    throw PairFormatError("expected exactly one '||' in conflict pair, found " + std::to_string(separators) +
                          ": '" + std::string(text) + "'");
  }
  const std::size_t at = text.find(kSeparator);
  auto a = trim_view(text.substr(0, at));
  auto b = trim_view(text.substr(at + kSeparator.size()));
  if (a.empty() || b.empty()) {
    throw PairFormatError("conflict pair has an empty side: '" + std::string(text) + "'");
  }
  return ConflictPair(std::string(a), std::string(b));
}

MemoryState new_memory() { return MemoryState{}; }

std::size_t conflicts_count(const MemoryState& memory) { return memory.conflicts.size(); }

std::string_view value_type_name(const Value& value) {
  switch (value.index()) {
    case 0: return "string";
    case 1: return "string list";
    case 2: return "conflict list";
    default: return "integer";
  }
}

std::string display_value(const Value& value) {
  if (const auto* s = std::get_if<std::string>(&value)) {
    return single_line(*s);
  }
  if (const auto* n = std::get_if<std::int64_t>(&value)) {
    return std::to_string(*n);
  }
  std::vector<std::string> items;
  if (const auto* list = std::get_if<StringList>(&value)) {
    items = *list;
  } else {
    for (const auto& pair : std::get<PairList>(value)) {
      items.push_back(serialize_pair(pair));
    }
  }
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) {
      out += " | ";
    }
    out += single_line(items[i]);
  }
  return out + "]";
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (is_blank(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

AddOutcome add_to_field(MemoryState& memory, MemoryField field, const Value& values) {
  const auto mismatch = [&] {
    return TypeMismatch("cannot add a " + std::string(value_type_name(values)) + " to " +
                        std::string(to_string(field)));
  };
  switch (field) {
    case MemoryField::Declarative:
    case MemoryField::Procedural: {
      auto& target = field == MemoryField::Declarative ? memory.declarative : memory.procedural;
      if (const auto* list = std::get_if<StringList>(&values)) {
        return append_strings(target, *list);
      }
      if (const auto* single = std::get_if<std::string>(&values)) {
        return append_strings(target, StringList{*single});
      }
      throw mismatch();
    }
    case MemoryField::Conflicts: {
      const auto* pairs = std::get_if<PairList>(&values);
      if (!pairs) {
        throw mismatch();
      }
      AddOutcome outcome;
      for (const auto& pair : *pairs) {
        const bool present = std::any_of(memory.conflicts.begin(), memory.conflicts.end(),
                                         [&](const ConflictPair& existing) { return same_pair(existing, pair); });
        if (present) {
          ++outcome.duplicates;
        } else {
          memory.conflicts.push_back(pair);
          ++outcome.appended;
        }
      }
      return outcome;
    }
    default:
      throw TypeMismatch("ADD cannot target " + std::string(to_string(field)));
  }
}

void Environment::bind(const std::string& name, Value value) { bindings_[name] = std::move(value); }

const Value* Environment::find(const std::string& name) const {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

Value field_value(const MemoryState& memory, MemoryField field) {
  switch (field) {
    case MemoryField::Working: return memory.working;
    case MemoryField::Declarative: return memory.declarative;
    case MemoryField::Procedural: return memory.procedural;
    case MemoryField::Conflicts: return memory.conflicts;
    case MemoryField::Resolution: return memory.resolution;
  }
  return std::string{};
}

std::string single_line(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      continue;
    }
    if (text[i] == '\n' || text[i] == '\r') {
      out += "\\n";
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

std::string unescape_single_line(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\\' && i + 1 < text.size() && text[i + 1] == 'n') {
      out.push_back('\n');
      ++i;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

std::string render_memory_fields(const MemoryState& memory) {
  std::ostringstream out;
  out << header_line("working", memory.working) << '\n';
  out << "declarative:\n";
  for (const auto& fact : memory.declarative) {
    out << "- " << single_line(fact) << '\n';
  }
  out << "procedural:\n";
  for (const auto& rule : memory.procedural) {
    out << "- " << single_line(rule) << '\n';
  }
  out << "conflicts:\n";
  for (const auto& pair : memory.conflicts) {
    out << "- " << single_line(serialize_pair(pair)) << '\n';
  }
  out << header_line("resolution", memory.resolution) << '\n';
  return out.str();
}

std::string render_final_memory(const MemoryState& memory) {
  return "FINAL MEMORY\n" + render_memory_fields(memory);
}

std::optional<MemoryState> parse_memory_fields(const std::vector<std::string>& lines, std::size_t& pos) {
  std::size_t cursor = pos;
  MemoryState memory;

  const auto header = [&](std::string_view name) -> std::optional<std::string> {
    skip_blank_lines(lines, cursor);
    if (cursor >= lines.size()) {
      return std::nullopt;
    }
    auto value = match_header(lines[cursor], name);
    if (value) {
      ++cursor;
    }
    return value;
  };
  const auto items = [&]() {
    std::vector<std::string> out;
    while (true) {
      skip_blank_lines(lines, cursor);
      if (cursor >= lines.size()) {
        break;
      }
      auto item = match_item(lines[cursor]);
      if (!item) {
        break;
      }
      if (!item->empty()) {
        out.push_back(std::move(*item));
      }
      ++cursor;
    }
    return out;
  };

  auto working = header("working");
  if (!working) {
    return std::nullopt;
  }
  memory.working = std::move(*working);
  for (auto field : {MemoryField::Declarative, MemoryField::Procedural, MemoryField::Conflicts}) {
    auto list_header = header(to_string(field));
    if (!list_header || !list_header->empty()) {
      return std::nullopt;
    }
    auto entries = items();
    if (field == MemoryField::Declarative) {
      memory.declarative = std::move(entries);
    } else if (field == MemoryField::Procedural) {
      memory.procedural = std::move(entries);
    } else {
      try {
        for (const auto& entry : entries) {
          memory.conflicts.push_back(parse_pair(entry));
        }
      } catch (const PairFormatError&) {
        return std::nullopt;
      }
    }
  }
  auto resolution = header("resolution");
  if (!resolution) {
    return std::nullopt;
  }
  memory.resolution = std::move(*resolution);
  pos = cursor;
  return memory;
}

std::optional<MemoryState> parse_final_memory(std::string_view text) {
  const auto lines = detail::split_lines(text);
  for (std::size_t i = lines.size(); i-- > 0;) {
    if (trim_view(lines[i]) == "FINAL MEMORY") {
      std::size_t pos = i + 1;
      return parse_memory_fields(lines, pos);
    }
  }
  return std::nullopt;
}

}  // namespace cogbasic
