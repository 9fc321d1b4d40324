#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cogbasic/ast.hpp"

namespace cogbasic {

enum class ConflictCategory { AbsoluteQualified, Negation, NumericCategorical, Unclassified };

std::string_view to_string(ConflictCategory category);
std::optional<ConflictCategory> conflict_category_from_name(std::string_view name);

/// Two contradictory declarative statements, serialized "a || b".
class ConflictPair {
 public:
  /// Throws PairFormatError if a side is empty, the sides are equal, or a side contains "||".
  ConflictPair(std::string a, std::string b, ConflictCategory category = ConflictCategory::Unclassified);

  const std::string& a() const { return a_; }
  const std::string& b() const { return b_; }
  ConflictCategory category() const { return category_; }

  /// Identity is the two statements; the category is an annotation.
  bool operator==(const ConflictPair& other) const { return a_ == other.a_ && b_ == other.b_; }

 private:
  std::string a_;
  std::string b_;
  ConflictCategory category_;
};

std::string serialize_pair(const ConflictPair& pair);
/// Inverse of serialize_pair. The category of the result is Unclassified.
ConflictPair parse_pair(std::string_view text);

struct MemoryState {
  std::string working;
  std::vector<std::string> declarative;
  std::vector<std::string> procedural;
  std::vector<ConflictPair> conflicts;
  std::string resolution;

  bool operator==(const MemoryState&) const = default;
};

MemoryState new_memory();
std::size_t conflicts_count(const MemoryState& memory);

using StringList = std::vector<std::string>;
using PairList = std::vector<ConflictPair>;
using Value = std::variant<std::string, StringList, PairList, std::int64_t>;

std::string_view value_type_name(const Value& value);
/// Single-line rendering used by PRINT.
std::string display_value(const Value& value);

/// Collapses whitespace runs and trims; the key used for duplicate detection.
std::string normalize_whitespace(std::string_view text);

struct AddOutcome {
  std::size_t appended = 0;
  std::size_t duplicates = 0;
};

/// Appends `values` to a list field, skipping entries already present after
/// whitespace normalization (pairs also match when reversed). Strings are
/// trimmed and empty strings dropped. A single string counts as a one-element
/// list. Throws TypeMismatch when the value does not fit the field.
AddOutcome add_to_field(MemoryState& memory, MemoryField field, const Value& values);

/// Variable bindings. Memory field names are not stored here; the interpreter
/// resolves them against MemoryState.
class Environment {
 public:
  void bind(const std::string& name, Value value);
  const Value* find(const std::string& name) const;
  const std::map<std::string, Value>& bindings() const { return bindings_; }

 private:
  std::map<std::string, Value> bindings_;
};

/// The value a memory field holds, as seen by expressions.
Value field_value(const MemoryState& memory, MemoryField field);

/// Escapes line breaks as the two characters "\n" so content stays on one line.
std::string single_line(std::string_view text);
std::string unescape_single_line(std::string_view text);

/// The five field lines (working through resolution) without a header.
std::string render_memory_fields(const MemoryState& memory);
/// "FINAL MEMORY" followed by render_memory_fields.
std::string render_final_memory(const MemoryState& memory);

/// Parses the field lines produced by render_memory_fields starting at
/// lines[pos]. Advances pos past the resolution line. Returns nullopt and leaves
/// pos unchanged if the lines do not form a memory block.
std::optional<MemoryState> parse_memory_fields(const std::vector<std::string>& lines, std::size_t& pos);
/// Finds the last "FINAL MEMORY" header in `text` and parses the block after it.
std::optional<MemoryState> parse_final_memory(std::string_view text);

}  // namespace cogbasic
