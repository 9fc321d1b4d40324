#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogbasic/ast.hpp"
#include "cogbasic/lexer.hpp"

namespace cogbasic {

/// Parses one tokenized, non-empty line into its line number and statement.
/// Throws ParseError (single diagnostic) on any grammar violation.
std::pair<LineNumber, Statement> parse_statement(const std::vector<Token>& tokens);

/// Parses a whole program. Blank lines are skipped; LF and CRLF are accepted.
/// Every bad line is reported in one ParseError; if the only problems are
/// repeated line numbers, DuplicateLineError is thrown instead.
Program parse_program(std::string_view source);

/// Canonical source text, one statement per line, LF separated, no trailing newline.
std::string format_program(const Program& program);

}  // namespace cogbasic
