#include "cogbasic/ast.hpp"

#include <array>
#include <utility>

namespace cogbasic {

namespace {

constexpr std::array<std::pair<Builtin, std::string_view>, 6> kBuiltinNames = {{
    {Builtin::Input, "INPUT"},
    {Builtin::ExtractDeclarative, "EXTRACT_DECLARATIVE"},
    {Builtin::ExtractProcedural, "EXTRACT_PROCEDURAL"},
    {Builtin::DetectConflicts, "DETECT_CONFLICTS"},
    {Builtin::ConflictsCount, "CONFLICTS_COUNT"},
    {Builtin::ResolveConflicts, "RESOLVE_CONFLICTS"},
}};

constexpr std::array<std::pair<MemoryField, std::string_view>, 5> kFieldNames = {{
    {MemoryField::Working, "working"},
    {MemoryField::Declarative, "declarative"},
    {MemoryField::Procedural, "procedural"},
    {MemoryField::Conflicts, "conflicts"},
    {MemoryField::Resolution, "resolution"},
}};

constexpr std::array<std::pair<CompareOp, std::string_view>, 6> kOps = {{
    {CompareOp::Greater, ">"},
    {CompareOp::Less, "<"},
    {CompareOp::GreaterEqual, ">="},
    {CompareOp::LessEqual, "<="},
    {CompareOp::Equal, "=="},
    {CompareOp::NotEqual, "!="},
}};

std::string quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

bool expression_invokes_resolve(const Expression& expr) {
  if (const auto* call = std::get_if<BuiltinCall>(&expr.node)) {
    if (call->function == Builtin::ResolveConflicts) {
      return true;
    }
    for (const auto& arg : call->arguments) {
      if (expression_invokes_resolve(arg)) {
        return true;
      }
    }
  }
  return false;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

bool BuiltinCall::operator==(const BuiltinCall& other) const {
  return function == other.function && arguments == other.arguments;
}

std::string_view to_string(Builtin builtin) {
  for (const auto& [value, name] : kBuiltinNames) {
    if (value == builtin) {
      return name;
    }
  }
  return "?";
}

std::optional<Builtin> builtin_from_name(std::string_view name) {
  for (const auto& [value, text] : kBuiltinNames) {
    if (text == name) {
      return value;
    }
  }
  return std::nullopt;
}

std::size_t builtin_arity(Builtin builtin) {
  switch (builtin) {
    case Builtin::ExtractDeclarative:
    case Builtin::ExtractProcedural:
      return 1;
    default:
      return 0;
  }
}

std::string_view to_string(MemoryField field) {
  for (const auto& [value, name] : kFieldNames) {
    if (value == field) {
      return name;
    }
  }
  return "?";
}

std::optional<MemoryField> memory_field_from_name(std::string_view name) {
  for (const auto& [value, text] : kFieldNames) {
    if (text == name) {
      return value;
    }
  }
  return std::nullopt;
}

bool is_list_field(MemoryField field) {
  return field == MemoryField::Declarative || field == MemoryField::Procedural ||
         field == MemoryField::Conflicts;
}

std::string_view to_string(CompareOp op) {
  for (const auto& [value, symbol] : kOps) {
    if (value == op) {
      return symbol;
    }
  }
  return "?";
}

std::optional<CompareOp> compare_op_from_symbol(std::string_view symbol) {
  for (const auto& [value, text] : kOps) {
    if (text == symbol) {
      return value;
    }
  }
  return std::nullopt;
}

bool compare(std::int64_t lhs, CompareOp op, std::int64_t rhs) {
  switch (op) {
    case CompareOp::Greater: return lhs > rhs;
    case CompareOp::Less: return lhs < rhs;
    case CompareOp::GreaterEqual: return lhs >= rhs;
    case CompareOp::LessEqual: return lhs <= rhs;
    case CompareOp::Equal: return lhs == rhs;
    case CompareOp::NotEqual: return lhs != rhs;
  }
  return false;
}

std::optional<LineNumber> Program::successor(LineNumber line) const {
  auto it = lines.upper_bound(line);
  if (it == lines.end()) {
    return std::nullopt;
  }
  return it->first;
}

std::optional<LineNumber> Program::first_line() const {
  if (lines.empty()) {
    return std::nullopt;
  }
  return lines.begin()->first;
}

std::string format_expression(const Expression& expr) {
  return std::visit(Overloaded{
                        [](const VariableRef& v) { return v.name; },
                        [](const IntegerLiteral& i) { return std::to_string(i.value); },
                        [](const StringLiteral& s) { return quote(s.value); },
                        [](const BuiltinCall& call) {
                          std::string out(to_string(call.function));
                          out += '(';
                          for (std::size_t i = 0; i < call.arguments.size(); ++i) {
                            if (i > 0) {
                              out += ", ";
                            }
                            out += format_expression(call.arguments[i]);
                          }
                          out += ')';
                          return out;
                        },
                    },
                    expr.node);
}

std::string format_statement(const Statement& statement) {
  return std::visit(
      Overloaded{
          [](const stmt::Rem& s) { return s.text.empty() ? std::string("REM") : "REM " + s.text; },
          [](const stmt::Assign& s) {
            return (s.explicit_let ? "LET " : "") + s.target + " = " + format_expression(s.value);
          },
          [](const stmt::Add& s) { return "ADD " + std::string(to_string(s.field)) + " FROM " + s.source; },
          [](const stmt::Print& s) { return "PRINT " + format_expression(s.value); },
          [](const stmt::If& s) {
            return "IF " + format_expression(s.condition.lhs) + " " + std::string(to_string(s.condition.op)) +
                   " " + format_expression(s.condition.rhs) + " THEN " + std::to_string(s.target);
          },
          [](const stmt::Goto& s) { return "GOTO " + std::to_string(s.target); },
          [](const stmt::Call& s) { return format_expression(Expression{s.call}); },
          [](const stmt::End&) { return std::string("END"); },
      },
      statement);
}

bool invokes_resolve(const Statement& statement) {
  if (const auto* assign = std::get_if<stmt::Assign>(&statement)) {
    return expression_invokes_resolve(assign->value);
  }
  if (const auto* call = std::get_if<stmt::Call>(&statement)) {
    return call->call.function == Builtin::ResolveConflicts;
  }
  if (const auto* print = std::get_if<stmt::Print>(&statement)) {
    return expression_invokes_resolve(print->value);
  }
  if (const auto* branch = std::get_if<stmt::If>(&statement)) {
    return expression_invokes_resolve(branch->condition.lhs) ||
           expression_invokes_resolve(branch->condition.rhs);
  }
  return false;
}

}  // namespace cogbasic
