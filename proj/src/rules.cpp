#include "cogbasic/rules.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <utility>

#include "cogbasic/assets.hpp"
#include "cogbasic/errors.hpp"

namespace cogbasic {

namespace {

struct Word {
  std::string raw;
  std::string norm;  // lowercase, surrounding punctuation removed
};

constexpr std::string_view kLeadingPunct = "\"'([{";
constexpr std::string_view kTrailingPunct = ".,;:!?\"')]}";
constexpr std::string_view kSentenceEnd = ".!?";
constexpr std::string_view kClosers = "\"')]}";

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool ends_with(std::string_view text, std::string_view suffix) {
  return text.size() >= suffix.size() && text.substr(text.size() - suffix.size()) == suffix;
}

std::string strip_punct(std::string_view text) {
  while (!text.empty() && kLeadingPunct.find(text.front()) != std::string_view::npos) {
    text.remove_prefix(1);
  }
  while (!text.empty() && kTrailingPunct.find(text.back()) != std::string_view::npos) {
    text.remove_suffix(1);
  }
  return std::string(text);
}

std::string normalize_word(std::string_view raw) {
  std::string norm = strip_punct(lowercase(raw));
  // "a.m" / "p.m" (the final dot was stripped above)
  for (std::string_view suffix : {"a.m", "p.m"}) {
    if (ends_with(norm, suffix)) {
      norm.erase(norm.size() - 3);
      norm += suffix.front();
      norm += 'm';
    }
  }
  return norm;
}

std::vector<Word> split_words(std::string_view sentence) {
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) {
      ++i;
    }
    const std::size_t start = i;
    while (i < sentence.size() && !is_space(sentence[i])) {
      ++i;
    }
    if (i > start) {
      std::string raw(sentence.substr(start, i - start));
      std::string norm = normalize_word(raw);
      words.push_back({std::move(raw), std::move(norm)});
    }
  }
  return words;
}

std::string strip_leading_zeros(std::string_view digits) {
  std::size_t i = 0;
  while (i + 1 < digits.size() && digits[i] == '0') {
    ++i;
  }
  return std::string(digits.substr(i));
}

struct NumberToken {
  ValueSlot::Kind kind;
  std::string key;
};

// Recognizes 9, 10, 3.5, 09:00, 9am, 9:30pm. `meridiem` supplies a separate
// "am"/"pm" word that followed the number.
std::optional<NumberToken> parse_number(std::string_view token, std::string_view meridiem = {}) {
  std::size_t i = 0;
  while (i < token.size() && is_digit(token[i])) {
    ++i;
  }
  if (i == 0 || i > 12) {
    return std::nullopt;
  }
  const std::string_view whole = token.substr(0, i);
  char separator = 0;
  std::string_view fraction;
  if (i < token.size() && (token[i] == ':' || token[i] == '.')) {
    separator = token[i];
    const std::size_t start = ++i;
    while (i < token.size() && is_digit(token[i])) {
      ++i;
    }
    fraction = token.substr(start, i - start);
    if (fraction.empty()) {
      return std::nullopt;
    }
  }
  std::string_view suffix = token.substr(i);
  if (suffix.empty()) {
    suffix = meridiem;
  }
  if (!suffix.empty() && suffix != "am" && suffix != "pm") {
    return std::nullopt;
  }

  const auto clock_key = [](int hour, int minute) {
    std::string key = std::to_string(hour);
    if (minute != 0) {
      key += ':';
      if (minute < 10) {
        key += '0';
      }
      key += std::to_string(minute);
    }
    return key;
  };

  if (!suffix.empty() || separator == ':') {
    if (whole.size() > 2 || (separator == ':' && fraction.size() != 2) || separator == '.') {
      return std::nullopt;
    }
    int hour = std::stoi(std::string(whole));
    const int minute = separator == ':' ? std::stoi(std::string(fraction)) : 0;
    if (minute > 59) {
      return std::nullopt;
    }
    if (!suffix.empty()) {
      if (hour < 1 || hour > 12) {
        return std::nullopt;
      }
      hour = hour % 12 + (suffix == "pm" ? 12 : 0);
    } else if (hour > 24) {
      return std::nullopt;
    }
    return NumberToken{ValueSlot::Kind::Time, clock_key(hour, minute)};
  }

  std::string key = strip_leading_zeros(whole);
  if (separator == '.') {
    std::string frac(fraction);
    while (!frac.empty() && frac.back() == '0') {
      frac.pop_back();
    }
    if (!frac.empty()) {
      key += '.' + frac;
    }
  }
  return NumberToken{ValueSlot::Kind::Number, key};
}

bool contains(const std::set<std::string>& set, const std::string& word) { return set.count(word) != 0; }

// "isn't" -> "is", "can't" -> "can", "won't" -> "will".
std::optional<std::string> contraction_base(const std::string& norm) {
  for (std::string_view marker : {"n't", "n\xE2\x80\x99t"}) {
    if (norm.size() > marker.size() && ends_with(norm, marker)) {
      std::string base = norm.substr(0, norm.size() - marker.size());
      if (base == "ca") {
        return std::string("can");
      }
      if (base == "wo") {
        return std::string("will");
      }
      if (base == "sha") {
        return std::string("shall");
      }
      return base;
    }
  }
  return std::nullopt;
}

std::string strip_terminal_punct(std::string text) {
  while (!text.empty() && std::string_view(".!?;:,").find(text.back()) != std::string_view::npos) {
    text.pop_back();
  }
  return text;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (w.empty()) {
      continue;
    }
    if (!out.empty()) {
      out += ' ';
    }
    out += w;
  }
  return out;
}

std::string trailing_punct(std::string_view raw) {
  std::size_t end = raw.size();
  while (end > 0 && std::string_view(".!?").find(raw[end - 1]) != std::string_view::npos) {
    --end;
  }
  return std::string(raw.substr(end));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot read lexicon file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::set<std::string> to_set(std::string_view text) {
  auto words = parse_word_list(text);
  return {words.begin(), words.end()};
}

void add_category(Lexicon& lexicon, std::string_view text, const std::string& name) {
  for (auto& word : parse_word_list(text)) {
    lexicon.categories.emplace(std::move(word), name);
  }
}

}  // namespace

std::vector<std::string> parse_word_list(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream tokens(line);
    std::string token;
    if (tokens >> token) {
      words.push_back(lowercase(token));
    }
  }
  return words;
}

Lexicon Lexicon::builtin() {
  Lexicon lexicon;
  lexicon.negations = to_set(assets::lexicon_negations());
  lexicon.absolute_quantifiers = to_set(assets::lexicon_absolute());
  lexicon.qualified_quantifiers = to_set(assets::lexicon_qualified());
  lexicon.imperative_verbs = to_set(assets::lexicon_verbs());
  lexicon.sequence_markers = to_set(assets::lexicon_sequence());
  lexicon.modals = to_set(assets::lexicon_modals());
  lexicon.conditionals = to_set(assets::lexicon_conditionals());
  lexicon.determiners = to_set(assets::lexicon_determiners());
  lexicon.copulas = to_set(assets::lexicon_copulas());
  lexicon.abbreviations = to_set(assets::lexicon_abbreviations());
  add_category(lexicon, assets::category_color(), "color");
  add_category(lexicon, assets::category_day(), "day");
  add_category(lexicon, assets::category_month(), "month");
  add_category(lexicon, assets::category_direction(), "direction");
  add_category(lexicon, assets::category_season(), "season");
  return lexicon;
}

Lexicon Lexicon::load(const std::filesystem::path& dir) {
  Lexicon lexicon;
  lexicon.negations = to_set(read_file(dir / "negations.txt"));
  lexicon.absolute_quantifiers = to_set(read_file(dir / "absolute_quantifiers.txt"));
  lexicon.qualified_quantifiers = to_set(read_file(dir / "qualified_quantifiers.txt"));
  lexicon.imperative_verbs = to_set(read_file(dir / "imperative_verbs.txt"));
  lexicon.sequence_markers = to_set(read_file(dir / "sequence_markers.txt"));
  lexicon.modals = to_set(read_file(dir / "modals.txt"));
  lexicon.conditionals = to_set(read_file(dir / "conditionals.txt"));
  lexicon.determiners = to_set(read_file(dir / "determiners.txt"));
  lexicon.copulas = to_set(read_file(dir / "copulas.txt"));
  lexicon.abbreviations = to_set(read_file(dir / "abbreviations.txt"));
  const auto category_dir = dir / "categories";
  if (std::filesystem::is_directory(category_dir)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(category_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      add_category(lexicon, read_file(file), file.stem().string());
    }
  }
  return lexicon;
}

std::string_view to_string(Polarity polarity) {
  return polarity == Polarity::Positive ? "positive" : "negative";
}

std::string_view to_string(Quantifier quantifier) {
  switch (quantifier) {
    case Quantifier::None: return "none";
    case Quantifier::AbsoluteAlways: return "absolute-always";
    case Quantifier::AbsoluteNever: return "absolute-never";
    case Quantifier::Qualified: return "qualified";
  }
  return "none";
}

std::string_view to_string(SentenceKind kind) {
  return kind == SentenceKind::Declarative ? "declarative" : "procedural";
}

bool absolute_qualified_rule(const FactAnalysis& x, const FactAnalysis& y) {
  const auto absolute = [](Quantifier q) {
    return q == Quantifier::AbsoluteAlways || q == Quantifier::AbsoluteNever;
  };
  const auto one_way = [&](Quantifier p, Quantifier q) {
    return absolute(p) && (q == Quantifier::Qualified || (absolute(q) && q != p));
  };
  return one_way(x.quantifier, y.quantifier) || one_way(y.quantifier, x.quantifier);
}

bool negation_rule(const FactAnalysis& x, const FactAnalysis& y) {
  if (x.polarity == y.polarity || x.value.has_value() != y.value.has_value()) {
    return false;
  }
  return !x.value || x.value->key == y.value->key;
}

bool numeric_categorical_rule(const FactAnalysis& x, const FactAnalysis& y) {
  return x.polarity == y.polarity && x.value && y.value && x.value->key != y.value->key;
}

std::optional<ConflictCategory> classify_conflict(const FactAnalysis& x, const FactAnalysis& y) {
  if (x.subject_key.empty() || x.subject_key != y.subject_key) {
    return std::nullopt;
  }
  if (absolute_qualified_rule(x, y)) {
    return ConflictCategory::AbsoluteQualified;
  }
  if (negation_rule(x, y)) {
    return ConflictCategory::Negation;
  }
  if (numeric_categorical_rule(x, y)) {
    return ConflictCategory::NumericCategorical;
  }
  return std::nullopt;
}

RuleProvider::RuleProvider(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}

std::vector<std::string> RuleProvider::segment_sentences(std::string_view text) const {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  const auto emit = [&](std::size_t end) {
    auto sentence = normalize_whitespace(text.substr(start, end - start));
    if (!sentence.empty()) {
      sentences.push_back(std::move(sentence));
    }
    start = end;
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    // A blank line always ends a sentence.
    if (c == '\n') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '\n' && is_space(text[j])) {
        ++j;
      }
      if (j < text.size() && text[j] == '\n') {
        emit(i);
        i = j;
        continue;
      }
    }
    if (kSentenceEnd.find(c) == std::string_view::npos) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && kSentenceEnd.find(text[end]) != std::string_view::npos) {
      ++end;
    }
    while (end < text.size() && kClosers.find(text[end]) != std::string_view::npos) {
      ++end;
    }
    if (end < text.size() && !is_space(text[end])) {
      i = end;
      continue;
    }
    if (c == '.' && end == i + 1) {
      std::size_t word_start = i;
      while (word_start > start && !is_space(text[word_start - 1])) {
        --word_start;
      }
      std::string word = lowercase(text.substr(word_start, i + 1 - word_start));
      while (!word.empty() && kLeadingPunct.find(word.front()) != std::string::npos) {
        word.erase(word.begin());
      }
      if (contains(lexicon_.abbreviations, word)) {
        i = end;
        continue;
      }
    }
    emit(end);
    i = end;
  }
  emit(text.size());
  return sentences;
}

SentenceKind RuleProvider::classify_sentence(std::string_view sentence) const {
  const auto words = split_words(sentence);
  std::size_t head = 0;
  while (head < words.size() && words[head].norm.empty()) {
    ++head;
  }
  if (head < words.size() && words[head].norm == "please") {
    ++head;
  }
  if (head >= words.size()) {
    return SentenceKind::Declarative;
  }
  const auto is_verb = [&](std::size_t i) {
    return i < words.size() && contains(lexicon_.imperative_verbs, words[i].norm);
  };
  const std::string& first = words[head].norm;

  if (contains(lexicon_.sequence_markers, first) || is_verb(head)) {
    return SentenceKind::Procedural;
  }
  if (first == "step" && head + 1 < words.size() && parse_number(words[head + 1].norm)) {
    return SentenceKind::Procedural;
  }
  if (contains(lexicon_.conditionals, first)) {
    for (std::size_t i = head; i + 1 < words.size(); ++i) {
      if (!words[i].raw.empty() && words[i].raw.back() == ',') {
        std::size_t action = i + 1;
        if (words[action].norm == "then") {
          ++action;
        }
        if (is_verb(action)) {
          return SentenceKind::Procedural;
        }
        break;
      }
    }
  }
  for (std::size_t i = head; i + 1 < words.size(); ++i) {
    if (contains(lexicon_.modals, words[i].norm) && is_verb(i + 1)) {
      return SentenceKind::Procedural;
    }
  }
  return SentenceKind::Declarative;
}

FactAnalysis RuleProvider::analyze_fact(std::string_view sentence) const {
  FactAnalysis analysis;
  analysis.raw = std::string(sentence);
  const auto words = split_words(sentence);

  std::size_t first_content = words.size();
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!words[i].norm.empty() && !contains(lexicon_.determiners, words[i].norm)) {
      first_content = i;
      break;
    }
  }

  // Value slot: the last number or time after the first content word, else a
  // trailing category word that follows a copula.
  for (std::size_t i = first_content + 1; i < words.size(); ++i) {
    const bool meridiem_follows =
        i + 1 < words.size() && (words[i + 1].norm == "am" || words[i + 1].norm == "pm");
    std::optional<NumberToken> number;
    if (meridiem_follows) {
      number = parse_number(words[i].norm, words[i + 1].norm);
    }
    const bool merged = number.has_value();
    if (!number) {
      number = parse_number(words[i].norm);
    }
    if (!number) {
      continue;
    }
    ValueSlot slot;
    slot.kind = number->kind;
    slot.key = number->key;
    slot.first_word = i;
    slot.last_word = merged ? i + 1 : i;
    slot.text = merged ? strip_punct(words[i].raw) + " " + strip_punct(words[i + 1].raw) : strip_punct(words[i].raw);
    if (slot.kind == ValueSlot::Kind::Number && i > 0) {
      const auto& before = words[i - 1].norm;
      if (before == "at" || before == "until" || before == "by" || before == "from" || before == "before" ||
          before == "after") {
        slot.kind = ValueSlot::Kind::Time;
      }
    }
    analysis.value = std::move(slot);
    if (merged) {
      ++i;
    }
  }
  if (!analysis.value && !words.empty() && words.size() - 1 > first_content && first_content < words.size()) {
    const std::size_t last = words.size() - 1;
    auto category = lexicon_.categories.find(words[last].norm);
    bool copula_before = false;
    for (std::size_t i = first_content; i < last; ++i) {
      copula_before = copula_before || contains(lexicon_.copulas, words[i].norm);
    }
    if (category != lexicon_.categories.end() && copula_before) {
      ValueSlot slot;
      slot.kind = ValueSlot::Kind::Category;
      slot.key = words[last].norm;
      slot.text = strip_punct(words[last].raw);
      slot.category = category->second;
      slot.first_word = last;
      slot.last_word = last;
      analysis.value = std::move(slot);
    }
  }

  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string& norm = words[i].norm;
    if (norm.empty() || contains(lexicon_.determiners, norm)) {
      continue;
    }
    if (analysis.value && i >= analysis.value->first_word && i <= analysis.value->last_word) {
      continue;
    }
    bool quantifier_word = false;
    if (contains(lexicon_.absolute_quantifiers, norm)) {
      quantifier_word = true;
      if (analysis.quantifier == Quantifier::None || analysis.quantifier == Quantifier::Qualified) {
        analysis.quantifier = norm == "never" ? Quantifier::AbsoluteNever : Quantifier::AbsoluteAlways;
      }
    } else if (contains(lexicon_.qualified_quantifiers, norm)) {
      quantifier_word = true;
      if (analysis.quantifier == Quantifier::None) {
        analysis.quantifier = Quantifier::Qualified;
      }
    }
    if (contains(lexicon_.negations, norm)) {
      analysis.polarity = Polarity::Negative;
      continue;
    }
    if (quantifier_word) {
      continue;
    }
    if (auto base = contraction_base(norm)) {
      analysis.polarity = Polarity::Negative;
      analysis.subject_key.push_back(std::move(*base));
      continue;
    }
    analysis.subject_key.push_back(norm);
  }
  return analysis;
}

std::vector<std::string> RuleProvider::extract(std::string_view text, SentenceKind kind) const {
  std::vector<std::string> out;
  for (auto& sentence : segment_sentences(text)) {
    if (classify_sentence(sentence) == kind) {
      out.push_back(std::move(sentence));
    }
  }
  return out;
}

std::vector<std::string> RuleProvider::extract_declarative(std::string_view text) const {
  return extract(text, SentenceKind::Declarative);
}

std::vector<std::string> RuleProvider::extract_procedural(std::string_view text) const {
  return extract(text, SentenceKind::Procedural);
}

std::vector<ConflictPair> RuleProvider::detect_conflicts(std::span<const std::string> facts) const {
  std::vector<FactAnalysis> analyses;
  analyses.reserve(facts.size());
  for (const auto& fact : facts) {
    analyses.push_back(analyze_fact(fact));
  }
  std::vector<ConflictPair> pairs;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    for (std::size_t j = i + 1; j < facts.size(); ++j) {
      if (auto category = classify_conflict(analyses[i], analyses[j])) {
        pairs.emplace_back(std::string(facts[i]), std::string(facts[j]), *category);
      }
    }
  }
  return pairs;
}

std::string RuleProvider::merge_pair(const ConflictPair& pair) const {
  const FactAnalysis a = analyze_fact(pair.a());
  const FactAnalysis b = analyze_fact(pair.b());
  ConflictCategory category = pair.category();
  if (category == ConflictCategory::Unclassified) {
    category = classify_conflict(a, b).value_or(ConflictCategory::Unclassified);
  }

  switch (category) {
    case ConflictCategory::AbsoluteQualified: {
      const bool use_b = a.polarity == Polarity::Negative && b.polarity == Polarity::Positive;
      const auto words = split_words(use_b ? pair.b() : pair.a());
      std::vector<std::string> out;
      bool placed = false;
      for (const auto& w : words) {
        const bool quantifier = contains(lexicon_.absolute_quantifiers, w.norm) ||
                                contains(lexicon_.qualified_quantifiers, w.norm);
        if (quantifier && !placed) {
          out.push_back("usually");
          placed = true;
          continue;
        }
        if (quantifier || contains(lexicon_.negations, w.norm)) {
          continue;
        }
        if (auto base = contraction_base(w.norm)) {
          out.push_back(*base);
          continue;
        }
        out.push_back(w.raw);
      }
      std::string text = strip_terminal_punct(join_words(out));
      if (!placed) {
        text += " usually";
      }
      return text + ", but sometimes not.";
    }
    case ConflictCategory::Negation: {
      const auto words = split_words(a.polarity == Polarity::Positive ? pair.a() : pair.b());
      std::vector<std::string> out;
      for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& w = words[i];
        if (contains(lexicon_.negations, w.norm)) {
          continue;
        }
        if (auto base = contraction_base(w.norm)) {
          out.push_back(*base);
          continue;
        }
        if (out.empty() && contains(lexicon_.determiners, w.norm)) {
          out.push_back(lowercase(w.raw));
          continue;
        }
        out.push_back(w.raw);
      }
      return "It is uncertain whether " + strip_terminal_punct(join_words(out)) + ".";
    }
    case ConflictCategory::NumericCategorical: {
      if (!a.value || !b.value) {
        break;
      }
      const auto words = split_words(pair.a());
      std::string noun = "a value";
      if (a.value->kind == ValueSlot::Kind::Time || b.value->kind == ValueSlot::Kind::Time) {
        noun = "a time";
      } else if (a.value->kind == ValueSlot::Kind::Category) {
        noun = "a " + a.value->category;
      }
      std::vector<std::string> out;
      for (std::size_t i = 0; i < a.value->first_word; ++i) {
        out.push_back(words[i].raw);
      }
      out.push_back(noun + " uncertain between " + a.value->text + " and " + b.value->text);
      for (std::size_t i = a.value->last_word + 1; i < words.size(); ++i) {
        out.push_back(words[i].raw);
      }
      std::string text = join_words(out);
      if (a.value->last_word + 1 == words.size()) {
        const auto ending = trailing_punct(words.back().raw);
        text += ending.empty() ? "." : ending;
      }
      return text;
    }
    case ConflictCategory::Unclassified:
      break;
  }
  return "Sources disagree: " + pair.a() + " / " + pair.b();
}

Resolution RuleProvider::resolve_conflicts(std::span<const ConflictPair> pairs) const {
  if (pairs.empty()) {
    throw EmptyInput("resolve_conflicts needs at least one conflict pair");
  }
  Resolution resolution;
  for (const auto& pair : pairs) {
    resolution.reconciled.push_back({pair, merge_pair(pair)});
    if (!resolution.summary.empty()) {
      resolution.summary += "; ";
    }
    resolution.summary += strip_terminal_punct(resolution.reconciled.back().merged);
  }
  resolution.summary += '.';
  return resolution;
}

}  // namespace cogbasic
