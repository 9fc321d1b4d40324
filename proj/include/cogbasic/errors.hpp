#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cogbasic {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed numeric literal, unterminated string, or stray character.
class LexError : public Error {
 public:
  LexError(std::string line_text, std::size_t column, const std::string& what);

  const std::string& line_text() const { return line_text_; }
  /// 1-based column of the offending character.
  std::size_t column() const { return column_; }

 private:
  std::string line_text_;
  std::size_t column_;
};

struct Diagnostic {
  std::size_t source_line = 0;   // 1-based physical line in the source text
  std::int64_t line_number = 0;  // BASIC line number, 0 when unknown
  std::string message;
};

/// One or more statements could not be parsed. Carries every diagnostic.
class ParseError : public Error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

class DuplicateLineError : public ParseError {
 public:
  DuplicateLineError(std::int64_t line_number, std::vector<Diagnostic> diagnostics);

  std::int64_t line_number() const { return line_number_; }

 private:
  std::int64_t line_number_;
};

class TypeMismatch : public Error {
 public:
  using Error::Error;
};

class UnboundVariable : public Error {
 public:
  UnboundVariable(std::string name, std::int64_t line_number);

  const std::string& name() const { return name_; }
  std::int64_t line_number() const { return line_number_; }

 private:
  std::string name_;
  std::int64_t line_number_;
};

class PairFormatError : public Error {
 public:
  using Error::Error;
};

/// resolve_conflicts called with no pairs.
class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// Raised by the interpreter for failures inside a running program.
class RuntimeError : public Error {
 public:
  RuntimeError(std::int64_t line_number, const std::string& detail);

  std::int64_t line_number() const { return line_number_; }

 private:
  std::int64_t line_number_;
};

/// A model reply has no FINAL MEMORY block. The raw reply is preserved.
class TraceParseError : public Error {
 public:
  TraceParseError(const std::string& what, std::string raw);

  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

// LLM transport errors all report how many attempts were made.

class LlmError : public Error {
 public:
  LlmError(const std::string& what, int attempts);

  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

class TransportError : public LlmError {
 public:
  using LlmError::LlmError;
};

class TimeoutError : public LlmError {
 public:
  using LlmError::LlmError;
};

class ApiError : public LlmError {
 public:
  ApiError(int status, std::string body_excerpt, int attempts);

  int status() const { return status_; }
  const std::string& body_excerpt() const { return body_excerpt_; }

 private:
  int status_;
  std::string body_excerpt_;
};

/// The model reply did not follow the demanded shape, even after a reformat request.
class OutputFormatError : public Error {
 public:
  OutputFormatError(const std::string& what, std::string raw_reply);

  const std::string& raw_reply() const { return raw_reply_; }

 private:
  std::string raw_reply_;
};

}  // namespace cogbasic
