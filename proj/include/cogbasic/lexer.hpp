#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cogbasic {

enum class TokenKind {
  Number,      // unsigned decimal literal
  Keyword,     // LET ADD FROM PRINT REM IF THEN GOTO END
  Builtin,     // INPUT EXTRACT_DECLARATIVE ... RESOLVE_CONFLICTS
  Word,        // any other uppercase word; rejected by the parser
  Identifier,  // [a-z][a-z0-9_]*
  String,      // text holds the unescaped contents
  Operator,    // = == != < > <= >=
  LParen,
  RParen,
  Comma,
  RemText,     // everything after REM, verbatim
};

struct Token {
  TokenKind kind;
  std::string text;
  std::uint64_t number = 0;
  std::size_t column = 1;  // 1-based

  bool operator==(const Token&) const = default;
};

std::string_view to_string(TokenKind kind);

/// Splits one physical line into tokens. Blank lines yield an empty vector.
/// Throws LexError on malformed literals or characters outside the grammar.
std::vector<Token> tokenize(std::string_view source_line);

bool is_identifier(std::string_view text);

}  // namespace cogbasic
