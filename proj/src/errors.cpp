#include "cogbasic/errors.hpp"

#include <sstream>
#include <utility>

namespace cogbasic {

namespace {

std::string describe(const std::vector<Diagnostic>& diagnostics) {
  std::ostringstream out;
  for (std::size_t i = 0; i < diagnostics.size(); ++i) {
    const auto& d = diagnostics[i];
    if (i > 0) {
      out << '\n';
    }
    out << "source line " << d.source_line;
    if (d.line_number > 0) {
      out << " (line " << d.line_number << ")";
    }
    out << ": " << d.message;
  }
  return out.str();
}

std::string excerpt(const std::string& text, std::size_t limit = 200) {
  if (text.size() <= limit) {
    return text;
  }
  return text.substr(0, limit) + "...";
}

}  // namespace

LexError::LexError(std::string line_text, std::size_t column, const std::string& what)
    : Error("column " + std::to_string(column) + ": " + what),
      line_text_(std::move(line_text)),
      column_(column) {}

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : Error(describe(diagnostics)), diagnostics_(std::move(diagnostics)) {}

DuplicateLineError::DuplicateLineError(std::int64_t line_number, std::vector<Diagnostic> diagnostics)
    : ParseError(std::move(diagnostics)), line_number_(line_number) {}

UnboundVariable::UnboundVariable(std::string name, std::int64_t line_number)
    : Error("line " + std::to_string(line_number) + ": variable '" + name + "' is not bound"),
      name_(std::move(name)),
      line_number_(line_number) {}

RuntimeError::RuntimeError(std::int64_t line_number, const std::string& detail)
    : Error("line " + std::to_string(line_number) + ": " + detail), line_number_(line_number) {}

TraceParseError::TraceParseError(const std::string& what, std::string raw)
    : Error(what), raw_(std::move(raw)) {}

LlmError::LlmError(const std::string& what, int attempts)
    : Error(what + " (after " + std::to_string(attempts) + " attempt" + (attempts == 1 ? "" : "s") + ")"),
      attempts_(attempts) {}

ApiError::ApiError(int status, std::string body_excerpt, int attempts)
    : LlmError("API error " + std::to_string(status) + ": " + excerpt(body_excerpt), attempts),
      status_(status),
      body_excerpt_(excerpt(body_excerpt)) {}

OutputFormatError::OutputFormatError(const std::string& what, std::string raw_reply)
    : Error(what), raw_reply_(std::move(raw_reply)) {}

}  // namespace cogbasic
