#include "cogbasic/parser.hpp"

#include <sstream>

#include "cogbasic/errors.hpp"

namespace cogbasic {

namespace {

// Recursive descent over a single line's tokens. Errors carry the line number
// once it has been read.
class LineParser {
 public:
  explicit LineParser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  std::pair<LineNumber, Statement> run() {
    if (tokens_.empty()) {
      fail("empty statement");
    }
    const Token& first = tokens_.front();
    if (first.kind != TokenKind::Number) {
      fail("expected a line number at the start of the line, found " + describe(first));
    }
    if (first.number == 0) {
      fail("line numbers must be positive");
    }
    line_ = static_cast<LineNumber>(first.number);
    pos_ = 1;
    Statement statement = parse_body();
    if (pos_ < tokens_.size()) {
      fail("unexpected " + describe(tokens_[pos_]) + " after the end of the statement");
    }
    return {line_, std::move(statement)};
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError({Diagnostic{0, line_, message}});
  }

  static std::string describe(const Token& token) {
    switch (token.kind) {
      case TokenKind::String:
        return "string literal";
      case TokenKind::RemText:
        return "comment text";
      default:
        return std::string(to_string(token.kind)) + " '" + token.text + "'";
    }
  }

  const Token* peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }

  const Token& next(const std::string& expected) {
    if (pos_ >= tokens_.size()) {
      fail("expected " + expected + ", found end of line");
    }
    return tokens_[pos_++];
  }

  bool at_keyword(std::string_view keyword) const {
    const Token* t = peek();
    return t && t->kind == TokenKind::Keyword && t->text == keyword;
  }

  void expect_keyword(std::string_view keyword) {
    const Token& t = next(std::string(keyword));
    if (t.kind != TokenKind::Keyword || t.text != keyword) {
      fail("expected " + std::string(keyword) + ", found " + describe(t));
    }
  }

  void expect(TokenKind kind, const std::string& expected) {
    const Token& t = next(expected);
    if (t.kind != kind) {
      fail("expected " + expected + ", found " + describe(t));
    }
  }

  LineNumber line_target() {
    const Token& t = next("a line number");
    if (t.kind != TokenKind::Number) {
      fail("expected a line number, found " + describe(t));
    }
    if (t.number == 0) {
      fail("branch target must be a positive line number");
    }
    return static_cast<LineNumber>(t.number);
  }

  Statement parse_body() {
    const Token& head = next("a statement");
    switch (head.kind) {
      case TokenKind::Keyword:
        return parse_keyword_statement(head);
      case TokenKind::Identifier:
        return parse_assignment(head.text, false);
      case TokenKind::Builtin:
        return parse_call_statement(head);
      case TokenKind::Word:
        fail("unrecognized command '" + head.text + "'");
      default:
        fail("expected a statement, found " + describe(head));
    }
  }

  Statement parse_keyword_statement(const Token& head) {
    if (head.text == "REM") {
      const Token* text = peek();
      if (text && text->kind == TokenKind::RemText) {
        ++pos_;
        return stmt::Rem{text->text};
      }
      return stmt::Rem{};
    }
    if (head.text == "LET") {
      const Token& target = next("a variable name");
      if (target.kind != TokenKind::Identifier) {
        fail("expected a lowercase variable after LET, found " + describe(target));
      }
      return parse_assignment(target.text, true);
    }
    if (head.text == "ADD") {
      const Token& field = next("a memory field");
      auto parsed = field.kind == TokenKind::Identifier ? memory_field_from_name(field.text) : std::nullopt;
      if (!parsed || !is_list_field(*parsed)) {
        fail("ADD target must be declarative, procedural or conflicts, found " + describe(field));
      }
      expect_keyword("FROM");
      const Token& source = next("a source variable");
      if (source.kind != TokenKind::Identifier) {
        fail("expected a lowercase source variable after FROM, found " + describe(source));
      }
      return stmt::Add{*parsed, source.text};
    }
    if (head.text == "PRINT") {
      return stmt::Print{parse_expression()};
    }
    if (head.text == "IF") {
      Comparison condition;
      condition.lhs = parse_expression();
      const Token& op = next("a comparison operator");
      auto parsed = op.kind == TokenKind::Operator ? compare_op_from_symbol(op.text) : std::nullopt;
      if (!parsed) {
        fail("expected one of > < >= <= == !=, found " + describe(op));
      }
      condition.op = *parsed;
      condition.rhs = parse_expression();
      expect_keyword("THEN");
      return stmt::If{std::move(condition), line_target()};
    }
    if (head.text == "GOTO") {
      return stmt::Goto{line_target()};
    }
    if (head.text == "END") {
      return stmt::End{};
    }
    fail("keyword " + head.text + " cannot start a statement");
  }

  Statement parse_assignment(const std::string& target, bool explicit_let) {
    auto field = memory_field_from_name(target);
    if (field && is_list_field(*field)) {
      fail("memory field '" + target + "' is append-only; use ADD " + target + " FROM <variable>");
    }
    const Token& eq = next("'='");
    if (eq.kind != TokenKind::Operator || eq.text != "=") {
      fail("expected '=' after '" + target + "', found " + describe(eq));
    }
    return stmt::Assign{target, parse_expression(), explicit_let};
  }

  Statement parse_call_statement(const Token& head) {
    --pos_;
    Expression expr = parse_expression();
    auto& call = std::get<BuiltinCall>(expr.node);
    if (call.function != Builtin::DetectConflicts && call.function != Builtin::ResolveConflicts) {
      fail(head.text + "() cannot be used as a statement; assign its result to a variable");
    }
    return stmt::Call{std::move(call)};
  }

  Expression parse_expression() {
    const Token& t = next("an expression");
    switch (t.kind) {
      case TokenKind::Identifier:
        return Expression{VariableRef{t.text}};
      case TokenKind::Number:
        return Expression{IntegerLiteral{static_cast<std::int64_t>(t.number)}};
      case TokenKind::String:
        return Expression{StringLiteral{t.text}};
      case TokenKind::Builtin: {
        const Builtin builtin = *builtin_from_name(t.text);
        BuiltinCall call{builtin, {}};
        expect(TokenKind::LParen, "'(' after " + t.text);
        const Token* after = peek();
        if (after && after->kind != TokenKind::RParen) {
          call.arguments.push_back(parse_expression());
          while (peek() && peek()->kind == TokenKind::Comma) {
            ++pos_;
            call.arguments.push_back(parse_expression());
          }
        }
        expect(TokenKind::RParen, "')' to close " + t.text + "(");
        const std::size_t arity = builtin_arity(builtin);
        if (call.arguments.size() != arity) {
          std::ostringstream msg;
          msg << t.text << " takes " << arity << " argument" << (arity == 1 ? "" : "s") << ", got "
              << call.arguments.size();
          fail(msg.str());
        }
        return Expression{std::move(call)};
      }
      case TokenKind::Word:
        fail("unknown function '" + t.text + "'");
      default:
        fail("expected an expression, found " + describe(t));
    }
  }

  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
  LineNumber line_ = 0;
};

std::vector<std::string_view> split_lines(std::string_view source) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= source.size()) {
    std::size_t end = source.find('\n', start);
    if (end == std::string_view::npos) {
      end = source.size();
    }
    std::string_view line = source.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

}  // namespace

std::pair<LineNumber, Statement> parse_statement(const std::vector<Token>& tokens) {
  return LineParser(tokens).run();
}

Program parse_program(std::string_view source) {
  Program program;
  std::vector<Diagnostic> diagnostics;
  LineNumber first_duplicate = 0;
  bool only_duplicates = true;

  const auto lines = split_lines(source);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t source_line = i + 1;
    try {
      const auto tokens = tokenize(lines[i]);
      if (tokens.empty()) {
        continue;
      }
      auto [number, statement] = parse_statement(tokens);
      if (!program.lines.emplace(number, std::move(statement)).second) {
        diagnostics.push_back({source_line, number, "duplicate line number " + std::to_string(number)});
        if (first_duplicate == 0) {
          first_duplicate = number;
        }
      }
    } catch (const LexError& e) {
      only_duplicates = false;
      diagnostics.push_back({source_line, 0, e.what()});
    } catch (const ParseError& e) {
      only_duplicates = false;
      for (auto d : e.diagnostics()) {
        d.source_line = source_line;
        diagnostics.push_back(std::move(d));
      }
    }
  }

  if (!diagnostics.empty()) {
    if (only_duplicates) {
      throw DuplicateLineError(first_duplicate, std::move(diagnostics));
    }
    throw ParseError(std::move(diagnostics));
  }
  return program;
}

std::string format_program(const Program& program) {
  std::string out;
  for (const auto& [number, statement] : program.lines) {
    if (!out.empty()) {
      out += '\n';
    }
    out += std::to_string(number);
    out += ' ';
    out += format_statement(statement);
  }
  return out;
}

}  // namespace cogbasic
