#include "program_gen.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace cogbasic::testing {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

constexpr std::array<std::string_view, 8> kIdentifiers = {"facts", "rules", "pairs", "x", "count_1", "tmp", "msg", "r2"};
constexpr std::array<std::string_view, 5> kFields = {"working", "declarative", "procedural", "conflicts", "resolution"};
constexpr std::array<std::string_view, 10> kWords = {"extract", "facts", "then", "Resolve", "IF",
                                                     "x = 1", "tab\there", "(paren)", "\"quoted\"", "50%"};
constexpr std::array<CompareOp, 6> kOps = {CompareOp::Greater,      CompareOp::Less,  CompareOp::GreaterEqual,
                                           CompareOp::LessEqual,    CompareOp::Equal, CompareOp::NotEqual};
constexpr std::array<Builtin, 6> kBuiltins = {Builtin::Input,           Builtin::ExtractDeclarative,
                                              Builtin::ExtractProcedural, Builtin::DetectConflicts,
                                              Builtin::ConflictsCount,  Builtin::ResolveConflicts};

std::string random_text(std::mt19937_64& rng, bool allow_empty) {
  std::string text;
  const std::size_t n = pick(rng, 5) + (allow_empty ? 0 : 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!text.empty()) {
      text += ' ';
    }
    text += kWords[pick(rng, kWords.size())];
  }
  return text;
}

std::string random_variable(std::mt19937_64& rng) {
  if (chance(rng, 0.3)) {
    return std::string(kFields[pick(rng, kFields.size())]);
  }
  return std::string(kIdentifiers[pick(rng, kIdentifiers.size())]);
}

Expression random_expression(std::mt19937_64& rng, int depth) {
  switch (pick(rng, depth > 1 ? 3 : 4)) {
    case 0:
      return Expression{VariableRef{random_variable(rng)}};
    case 1:
      return Expression{IntegerLiteral{static_cast<std::int64_t>(pick(rng, 1000000))}};
    case 2: {
      std::string value = random_text(rng, true);
      for (auto& c : value) {
        if (c == '\t') c = ' ';
      }
      return Expression{StringLiteral{value}};
    }
    default: {
      const Builtin builtin = kBuiltins[pick(rng, kBuiltins.size())];
      BuiltinCall call{builtin, {}};
      for (std::size_t i = 0; i < builtin_arity(builtin); ++i) {
        call.arguments.push_back(random_expression(rng, depth + 1));
      }
      return Expression{std::move(call)};
    }
  }
}

std::vector<LineNumber> random_line_numbers(std::mt19937_64& rng, std::size_t count) {
  std::vector<LineNumber> lines;
  LineNumber line = 0;
  const LineNumber stride = chance(rng, 0.5) ? 10 : 1 + static_cast<LineNumber>(pick(rng, 7));
  for (std::size_t i = 0; i < count; ++i) {
    line += chance(rng, 0.8) ? stride : 1 + static_cast<LineNumber>(pick(rng, 40));
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

Program random_program(std::mt19937_64& rng, std::size_t max_lines) {
  const auto lines = random_line_numbers(rng, 1 + pick(rng, max_lines));
  const auto target = [&]() -> LineNumber {
    return chance(rng, 0.8) ? lines[pick(rng, lines.size())] : 1 + static_cast<LineNumber>(pick(rng, 500));
  };
  Program program;
  for (const LineNumber line : lines) {
    Statement statement;
    switch (pick(rng, 8)) {
      case 0: {
        std::string text = random_text(rng, true);
        for (auto& c : text) {
          if (c == '\t') c = ' ';
        }
        statement = stmt::Rem{text};
        break;
      }
      case 1: {
        std::string name = chance(rng, 0.2) ? std::string(chance(rng, 0.5) ? "working" : "resolution")
                                            : std::string(kIdentifiers[pick(rng, kIdentifiers.size())]);
        statement = stmt::Assign{name, random_expression(rng, 0), chance(rng, 0.5)};
        break;
      }
      case 2: {
        const std::array<MemoryField, 3> fields = {MemoryField::Declarative, MemoryField::Procedural,
                                                   MemoryField::Conflicts};
        statement = stmt::Add{fields[pick(rng, 3)], random_variable(rng)};
        break;
      }
      case 3:
        statement = stmt::Print{random_expression(rng, 0)};
        break;
      case 4:
        statement = stmt::If{Comparison{random_expression(rng, 0), kOps[pick(rng, kOps.size())],
                                        random_expression(rng, 0)},
                             target()};
        break;
      case 5:
        statement = stmt::Goto{target()};
        break;
      case 6:
        statement = stmt::Call{BuiltinCall{chance(rng, 0.5) ? Builtin::DetectConflicts : Builtin::ResolveConflicts, {}}};
        break;
      default:
        statement = stmt::End{};
        break;
    }
    program.lines.emplace(line, std::move(statement));
  }
  return program;
}

Program random_runnable_program(std::mt19937_64& rng, std::size_t max_lines) {
  // Fixed prologue binding every variable the body may read.
  std::vector<Statement> prologue = {
      stmt::Assign{"working", Expression{BuiltinCall{Builtin::Input, {}}}, true},
      stmt::Assign{"facts",
                   Expression{BuiltinCall{Builtin::ExtractDeclarative, {Expression{VariableRef{"working"}}}}}, false},
      stmt::Assign{"rules",
                   Expression{BuiltinCall{Builtin::ExtractProcedural, {Expression{VariableRef{"working"}}}}}, false},
  };
  const std::size_t body = max_lines > prologue.size() + 1 ? pick(rng, max_lines - prologue.size() - 1) : 0;
  const auto lines = random_line_numbers(rng, prologue.size() + body + 1);
  const auto target = [&]() { return lines[pick(rng, lines.size())]; };
  const auto int_expr = [&]() -> Expression {
    if (chance(rng, 0.6)) {
      return Expression{BuiltinCall{Builtin::ConflictsCount, {}}};
    }
    return Expression{IntegerLiteral{static_cast<std::int64_t>(pick(rng, 4))}};
  };

  Program program;
  std::size_t index = 0;
  for (auto& statement : prologue) {
    program.lines.emplace(lines[index++], std::move(statement));
  }
  for (std::size_t i = 0; i < body; ++i) {
    Statement statement;
    switch (pick(rng, 11)) {
      case 0:
        statement = stmt::Rem{"step " + std::to_string(i)};
        break;
      case 1:
        statement = stmt::Add{MemoryField::Declarative, "facts"};
        break;
      case 2:
        statement = stmt::Add{MemoryField::Procedural, "rules"};
        break;
      case 3:
        statement = stmt::Assign{"pairs", Expression{BuiltinCall{Builtin::DetectConflicts, {}}}, false};
        program.lines.emplace(lines[index++], std::move(statement));
        if (i + 1 < body) {
          ++i;
          statement = stmt::Add{MemoryField::Conflicts, "pairs"};
        } else {
          continue;
        }
        break;
      case 4:
        statement = stmt::Call{BuiltinCall{Builtin::DetectConflicts, {}}};
        break;
      case 5:
        statement = stmt::Assign{"resolution", Expression{BuiltinCall{Builtin::ResolveConflicts, {}}}, false};
        break;
      case 6:
        statement = stmt::Call{BuiltinCall{Builtin::ResolveConflicts, {}}};
        break;
      case 7:
        statement = stmt::Print{chance(rng, 0.5) ? Expression{VariableRef{random_variable(rng)}} : int_expr()};
        if (const auto* var = std::get_if<VariableRef>(&std::get<stmt::Print>(statement).value.node);
            var && var->name != "facts" && var->name != "rules" && !memory_field_from_name(var->name)) {
          statement = stmt::Print{Expression{VariableRef{"facts"}}};
        }
        break;
      case 8:
        statement = stmt::If{Comparison{int_expr(), kOps[pick(rng, kOps.size())], int_expr()}, target()};
        break;
      case 9:
        statement = chance(rng, 0.3) ? Statement{stmt::Goto{target()}} : Statement{stmt::Rem{}};
        break;
      default:
        statement = stmt::Assign{"tmp", int_expr(), chance(rng, 0.5)};
        break;
    }
    program.lines.emplace(lines[index++], std::move(statement));
  }
  program.lines.emplace(lines[index], stmt::End{});
  return program;
}

std::string random_scenario(std::mt19937_64& rng) {
  static const std::array<std::string_view, 16> pool = {
      "The sky is clear.",          "The sky is not clear.",        "The shop opens at 9.",
      "The shop opens at 10.",      "The alarm always rings.",      "The alarm sometimes rings.",
      "The car is red.",            "The car is blue.",             "Cats purr.",
      "Close the door.",            "First, heat the oven.",        "If it rains, take an umbrella.",
      "The meeting is on Monday.",  "The meeting is on Tuesday.",   "Water boils.",
      "You should save the file.",
  };
  std::string text;
  const std::size_t n = 2 + pick(rng, 4);
  for (std::size_t i = 0; i < n; ++i) {
    if (!text.empty()) {
      text += ' ';
    }
    text += pool[pick(rng, pool.size())];
  }
  return text;
}

}  // namespace cogbasic::testing
