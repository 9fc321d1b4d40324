#include "cogbasic/lexer.hpp"

#include <array>
#include <cctype>
#include <limits>

#include "cogbasic/errors.hpp"

namespace cogbasic {

namespace {

constexpr std::array<std::string_view, 9> kKeywords = {"LET", "ADD", "FROM", "PRINT", "REM",
                                                       "IF", "THEN", "GOTO", "END"};

constexpr std::array<std::string_view, 6> kBuiltins = {
    "INPUT", "EXTRACT_DECLARATIVE", "EXTRACT_PROCEDURAL", "DETECT_CONFLICTS", "CONFLICTS_COUNT",
    "RESOLVE_CONFLICTS"};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_word_char(char c) { return is_digit(c) || is_upper(c) || is_lower(c) || c == '_'; }

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view word) {
  for (auto entry : set) {
    if (entry == word) {
      return true;
    }
  }
  return false;
}

bool is_upper_word(std::string_view word) {
  if (word.empty() || !is_upper(word.front())) {
    return false;
  }
  for (char c : word) {
    if (!(is_upper(c) || is_digit(c) || c == '_')) {
      return false;
    }
  }
  return true;
}

class Lexer {
 public:
  explicit Lexer(std::string_view line) : line_(line) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skip_space();
      if (pos_ >= line_.size()) {
        break;
      }
      const char c = line_[pos_];
      const std::size_t column = pos_ + 1;
      if (c == '\n') {
        fail(column, "unexpected line break inside a statement");
      }
      if (is_digit(c)) {
        tokens.push_back(number(column));
      } else if (is_word_char(c)) {
        tokens.push_back(word(column));
        if (tokens.back().kind == TokenKind::Keyword && tokens.back().text == "REM") {
          tokens.push_back(rem_text());
          break;
        }
      } else if (c == '"') {
        tokens.push_back(string_literal(column));
      } else if (c == '(') {
        tokens.push_back({TokenKind::LParen, "(", 0, column});
        ++pos_;
      } else if (c == ')') {
        tokens.push_back({TokenKind::RParen, ")", 0, column});
        ++pos_;
      } else if (c == ',') {
        tokens.push_back({TokenKind::Comma, ",", 0, column});
        ++pos_;
      } else if (c == '=' || c == '!' || c == '<' || c == '>') {
        tokens.push_back(op(column));
      } else {
        fail(column, std::string("unexpected character '") + c + "'");
      }
    }
    return tokens;
  }

 private:
  [[noreturn]] void fail(std::size_t column, const std::string& what) const {
    throw LexError(std::string(line_), column, what);
  }

  void skip_space() {
    while (pos_ < line_.size() && is_space(line_[pos_])) {
      ++pos_;
    }
  }

  Token number(std::size_t column) {
    const std::size_t start = pos_;
    std::uint64_t value = 0;
    constexpr auto kMax = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
    while (pos_ < line_.size() && is_digit(line_[pos_])) {
      const auto digit = static_cast<std::uint64_t>(line_[pos_] - '0');
      if (value > (kMax - digit) / 10) {
        fail(column, "numeric literal out of range");
      }
      value = value * 10 + digit;
      ++pos_;
    }
    if (pos_ < line_.size() && (is_word_char(line_[pos_]) || line_[pos_] == '.')) {
      fail(column, "malformed numeric literal '" + std::string(line_.substr(start, pos_ - start + 1)) + "'");
    }
    return {TokenKind::Number, std::string(line_.substr(start, pos_ - start)), value, column};
  }

  Token word(std::size_t column) {
    const std::size_t start = pos_;
    while (pos_ < line_.size() && is_word_char(line_[pos_])) {
      ++pos_;
    }
    std::string text(line_.substr(start, pos_ - start));
    if (is_upper_word(text)) {
      TokenKind kind = TokenKind::Word;
      if (contains(kKeywords, text)) {
        kind = TokenKind::Keyword;
      } else if (contains(kBuiltins, text)) {
        kind = TokenKind::Builtin;
      }
      return {kind, std::move(text), 0, column};
    }
    if (is_identifier(text)) {
      return {TokenKind::Identifier, std::move(text), 0, column};
    }
    fail(column, "invalid name '" + text + "': keywords are uppercase, variables lowercase");
  }

  Token rem_text() {
    skip_space();
    std::size_t end = line_.size();
    while (end > pos_ && is_space(line_[end - 1])) {
      --end;
    }
    Token token{TokenKind::RemText, std::string(line_.substr(pos_, end - pos_)), 0, pos_ + 1};
    pos_ = line_.size();
    return token;
  }

  Token string_literal(std::size_t column) {
    ++pos_;  // opening quote
    std::string value;
    while (pos_ < line_.size()) {
      const char c = line_[pos_++];
      if (c == '"') {
        return {TokenKind::String, std::move(value), 0, column};
      }
      if (c == '\\') {
        if (pos_ >= line_.size()) {
          break;
        }
        const char escaped = line_[pos_++];
        if (escaped != '"' && escaped != '\\') {
          fail(pos_ - 1, std::string("invalid escape '\\") + escaped + "' in string literal");
        }
        value.push_back(escaped);
        continue;
      }
      if (c == '\n') {
        break;
      }
      value.push_back(c);
    }
    fail(column, "unterminated string literal");
  }

  Token op(std::size_t column) {
    const char c = line_[pos_++];
    const bool followed_by_eq = pos_ < line_.size() && line_[pos_] == '=';
    if (followed_by_eq) {
      ++pos_;
      return {TokenKind::Operator, std::string{c, '='}, 0, column};
    }
    if (c == '!') {
      fail(column, "expected '!='");
    }
    return {TokenKind::Operator, std::string(1, c), 0, column};
  }

  std::string_view line_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Number: return "number";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Builtin: return "builtin";
    case TokenKind::Word: return "word";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::String: return "string";
    case TokenKind::Operator: return "operator";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::Comma: return "','";
    case TokenKind::RemText: return "comment text";
  }
  return "token";
}

bool is_identifier(std::string_view text) {
  if (text.empty() || !is_lower(text.front())) {
    return false;
  }
  for (char c : text) {
    if (!(is_lower(c) || is_digit(c) || c == '_')) {
      return false;
    }
  }
  return true;
}

std::vector<Token> tokenize(std::string_view source_line) {
  // A trailing CR from CRLF input is whitespace.
  return Lexer(source_line).run();
}

}  // namespace cogbasic
