#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogbasic/provider.hpp"

namespace cogbasic {

/// Parses a word list: one token per line, '#' starts a comment, blank lines
/// ignored. Tokens are lowercased.
std::vector<std::string> parse_word_list(std::string_view text);

/// Fixed English word lists driving the rule-based provider.
struct Lexicon {
  std::set<std::string> negations;
  std::set<std::string> absolute_quantifiers;
  std::set<std::string> qualified_quantifiers;
  std::set<std::string> imperative_verbs;
  std::set<std::string> sequence_markers;
  std::set<std::string> modals;
  std::set<std::string> conditionals;
  std::set<std::string> determiners;
  std::set<std::string> copulas;
  std::set<std::string> abbreviations;
  std::map<std::string, std::string> categories;  // token -> class name ("red" -> "color")

  /// The lists compiled into the library.
  static Lexicon builtin();
  /// Reads the same file layout as data/lexicon/ from `dir`. Throws Error when a file is missing.
  static Lexicon load(const std::filesystem::path& dir);
};

enum class Polarity { Positive, Negative };
enum class Quantifier { None, AbsoluteAlways, AbsoluteNever, Qualified };
enum class SentenceKind { Declarative, Procedural };

std::string_view to_string(Polarity polarity);
std::string_view to_string(Quantifier quantifier);
std::string_view to_string(SentenceKind kind);

struct ValueSlot {
  enum class Kind { Number, Time, Category };

  Kind kind = Kind::Number;
  std::string text;       // as written, trailing punctuation removed ("9am", "9 am", "Monday")
  std::string key;        // comparison key; "9", "9am" and "09:00" all give "9"
  std::string category;   // class name for Kind::Category
  std::size_t first_word = 0;  // word span in the sentence
  std::size_t last_word = 0;

  bool operator==(const ValueSlot&) const = default;
};

struct FactAnalysis {
  std::vector<std::string> subject_key;
  Polarity polarity = Polarity::Positive;
  Quantifier quantifier = Quantifier::None;
  std::optional<ValueSlot> value;
  std::string raw;
};

// The three contradiction rules. Each assumes nothing about the subject keys;
// the caller checks those.

/// One side absolute, the other qualified or the opposite absolute.
bool absolute_qualified_rule(const FactAnalysis& x, const FactAnalysis& y);
/// Opposite polarity with the same value slot (both empty or equal keys).
bool negation_rule(const FactAnalysis& x, const FactAnalysis& y);
/// Same polarity, both value slots set, different keys.
bool numeric_categorical_rule(const FactAnalysis& x, const FactAnalysis& y);

/// Category of the first rule that fires for facts with matching non-empty subject keys.
std::optional<ConflictCategory> classify_conflict(const FactAnalysis& x, const FactAnalysis& y);

/// Deterministic provider built from the lexicon. Immutable after construction,
/// so one instance may be shared by any number of threads.
class RuleProvider final : public CognitiveOps {
 public:
  explicit RuleProvider(Lexicon lexicon = Lexicon::builtin());

  const Lexicon& lexicon() const { return lexicon_; }

  std::vector<std::string> segment_sentences(std::string_view text) const;
  SentenceKind classify_sentence(std::string_view sentence) const;
  FactAnalysis analyze_fact(std::string_view sentence) const;
  /// Reconciled statement for one pair. Unclassified pairs are re-analyzed first.
  std::string merge_pair(const ConflictPair& pair) const;

  std::vector<std::string> extract_declarative(std::string_view text) const override;
  std::vector<std::string> extract_procedural(std::string_view text) const override;
  std::vector<ConflictPair> detect_conflicts(std::span<const std::string> facts) const override;
  Resolution resolve_conflicts(std::span<const ConflictPair> pairs) const override;

 private:
  std::vector<std::string> extract(std::string_view text, SentenceKind kind) const;

  Lexicon lexicon_;
};

}  // namespace cogbasic
