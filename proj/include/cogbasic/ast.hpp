#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cogbasic {

using LineNumber = std::int64_t;

enum class Builtin {
  Input,
  ExtractDeclarative,
  ExtractProcedural,
  DetectConflicts,
  ConflictsCount,
  ResolveConflicts,
};

std::string_view to_string(Builtin builtin);
std::optional<Builtin> builtin_from_name(std::string_view name);
std::size_t builtin_arity(Builtin builtin);

/// The five memory variables. Their names are reserved in the environment.
enum class MemoryField { Working, Declarative, Procedural, Conflicts, Resolution };

std::string_view to_string(MemoryField field);
std::optional<MemoryField> memory_field_from_name(std::string_view name);
/// declarative, procedural and conflicts: the fields ADD may target.
bool is_list_field(MemoryField field);

struct Expression;

struct VariableRef {
  std::string name;
  bool operator==(const VariableRef&) const = default;
};

struct BuiltinCall {
  Builtin function;
  std::vector<Expression> arguments;
  bool operator==(const BuiltinCall&) const;
};

struct IntegerLiteral {
  std::int64_t value = 0;
  bool operator==(const IntegerLiteral&) const = default;
};

struct StringLiteral {
  std::string value;
  bool operator==(const StringLiteral&) const = default;
};

struct Expression {
  std::variant<VariableRef, BuiltinCall, IntegerLiteral, StringLiteral> node;
  bool operator==(const Expression&) const = default;
};

enum class CompareOp { Greater, Less, GreaterEqual, LessEqual, Equal, NotEqual };

std::string_view to_string(CompareOp op);
std::optional<CompareOp> compare_op_from_symbol(std::string_view symbol);
bool compare(std::int64_t lhs, CompareOp op, std::int64_t rhs);

struct Comparison {
  Expression lhs;
  CompareOp op = CompareOp::Greater;
  Expression rhs;
  bool operator==(const Comparison&) const = default;
};

namespace stmt {

struct Rem {
  std::string text;
  bool operator==(const Rem&) const = default;
};

struct Assign {
  std::string target;
  Expression value;
  bool explicit_let = false;  // written as "LET x = ..." rather than "x = ..."
  bool operator==(const Assign&) const = default;
};

struct Add {
  MemoryField field = MemoryField::Declarative;
  std::string source;
  bool operator==(const Add&) const = default;
};

struct Print {
  Expression value;
  bool operator==(const Print&) const = default;
};

struct If {
  Comparison condition;
  LineNumber target = 0;
  bool operator==(const If&) const = default;
};

struct Goto {
  LineNumber target = 0;
  bool operator==(const Goto&) const = default;
};

/// DETECT_CONFLICTS() or RESOLVE_CONFLICTS() used as a statement.
struct Call {
  BuiltinCall call;
  bool operator==(const Call&) const = default;
};

struct End {
  bool operator==(const End&) const = default;
};

}  // namespace stmt

using Statement =
    std::variant<stmt::Rem, stmt::Assign, stmt::Add, stmt::Print, stmt::If, stmt::Goto, stmt::Call, stmt::End>;

struct Program {
  std::map<LineNumber, Statement> lines;

  bool operator==(const Program&) const = default;

  bool contains(LineNumber line) const { return lines.count(line) != 0; }
  /// Smallest line strictly greater than `line`, if any.
  std::optional<LineNumber> successor(LineNumber line) const;
  std::optional<LineNumber> first_line() const;
};

std::string format_expression(const Expression& expr);
std::string format_statement(const Statement& statement);
/// True when evaluating the statement invokes RESOLVE_CONFLICTS.
bool invokes_resolve(const Statement& statement);

}  // namespace cogbasic
