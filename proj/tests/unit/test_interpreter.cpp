#include <doctest.h>

#include <random>

#include "cogbasic/errors.hpp"
#include "cogbasic/interpreter.hpp"
#include "cogbasic/parser.hpp"
#include "cogbasic/rules.hpp"
#include "fixtures.hpp"
#include "program_gen.hpp"

using namespace cogbasic;

namespace {

const RuleProvider& rules() {
  static const RuleProvider provider;
  return provider;
}

std::vector<LineNumber> lines_of(const RunResult& result) {
  std::vector<LineNumber> out;
  for (const auto& entry : result.trace) out.push_back(entry.line);
  return out;
}

// Counts provider calls and fails on demand.
class CountingProvider final : public CognitiveOps {
 public:
  mutable int calls = 0;
  bool fail = false;

  std::vector<std::string> extract_declarative(std::string_view text) const override {
    ++calls;
    if (fail) throw Error("backend down");
    return rules().extract_declarative(text);
  }
  std::vector<std::string> extract_procedural(std::string_view text) const override {
    ++calls;
    return rules().extract_procedural(text);
  }
  std::vector<ConflictPair> detect_conflicts(std::span<const std::string> facts) const override {
    ++calls;
    return rules().detect_conflicts(facts);
  }
  Resolution resolve_conflicts(std::span<const ConflictPair> pairs) const override {
    ++calls;
    return rules().resolve_conflicts(pairs);
  }
};

}  // namespace

TEST_CASE("reference program, conflict path") {
  const auto program = testing::reference_program();
  const auto result = run(program, "The sky is clear. The sky is not clear.", rules());
  CHECK(result.outcome == Outcome::Completed);
  CHECK(lines_of(result) == std::vector<LineNumber>{10, 20, 30, 40, 50, 60, 70, 90, 100});
  CHECK(result.final_memory.conflicts.empty());
  CHECK_FALSE(result.final_memory.resolution.empty());
  CHECK(result.final_memory.declarative == std::vector<std::string>{"It is uncertain whether the sky is clear."});
  // Line 60 holds the pair before resolution.
  CHECK(result.trace[5].memory.conflicts.size() == 1);
  CHECK(result.trace[5].memory.declarative.size() == 2);
}

TEST_CASE("reference program, no-conflict path") {
  const auto result = run(testing::reference_program(), "Water boils. Ice is cold.", rules());
  CHECK(result.outcome == Outcome::Completed);
  CHECK(lines_of(result) == std::vector<LineNumber>{10, 20, 30, 40, 50, 60, 70, 80});
  CHECK(result.final_memory.resolution.empty());
  CHECK(result.final_memory.conflicts.empty());
  CHECK(result.final_memory.declarative.size() == 2);
}

TEST_CASE("step limit") {
  const auto program = parse_program("10 GOTO 10");
  const auto result = run(program, "", rules(), RunLimits{100});
  CHECK(result.outcome == Outcome::StepLimitExceeded);
  CHECK(result.trace.size() == 100);
  CHECK(run(program, "", rules()).trace.size() == kDefaultStepLimit);
}

TEST_CASE("branch to a missing line") {
  const auto result = run(parse_program("10 GOTO 99\n20 END"), "", rules());
  CHECK(result.outcome == Outcome::RuntimeError);
  CHECK(result.detail.find("99") != std::string::npos);
  CHECK(result.trace.empty());

  const auto untaken = run(parse_program("10 IF 0 > 1 THEN 99\n20 END"), "", rules());
  CHECK(untaken.outcome == Outcome::Completed);
}

TEST_CASE("falling off the end is a runtime error") {
  const auto result = run(parse_program("10 REM no end"), "", rules());
  CHECK(result.outcome == Outcome::RuntimeError);
  REQUIRE(result.trace.size() == 1);
  CHECK_FALSE(result.trace[0].next.has_value());
}

TEST_CASE("step semantics") {
  const auto program = testing::reference_program();
  ExecutionState state(program, "The sky is clear. The sky is not clear.");
  CHECK(state.current_line() == 10);
  const auto rem = step(state, rules());
  CHECK(rem.memory == new_memory());
  CHECK(rem.next == 20);
  while (state.current_line() != 70) step(state, rules());
  const auto branch = step(state, rules());
  CHECK(branch.next == 90);

  ExecutionState quiet(program, "Water boils.");
  while (quiet.current_line() != 70) step(quiet, rules());
  CHECK(step(quiet, rules()).next == 80);
  const auto end = step(quiet, rules());
  CHECK_FALSE(end.next.has_value());
  CHECK(quiet.status() == Status::Ended);
  CHECK_THROWS_AS(step(quiet, rules()), Error);
}

TEST_CASE("type mismatch in a comparison") {
  const auto result = run(parse_program("10 IF \"a\" > 1 THEN 20\n20 END"), "", rules());
  CHECK(result.outcome == Outcome::RuntimeError);
  CHECK(result.detail.find("not an integer") != std::string::npos);
}

TEST_CASE("unbound variable") {
  const auto result = run(parse_program("10 ADD declarative FROM nothing\n20 END"), "", rules());
  CHECK(result.outcome == Outcome::RuntimeError);
  CHECK(result.detail.find("nothing") != std::string::npos);
  CHECK(result.detail.find("10") != std::string::npos);
}

TEST_CASE("provider failures become runtime errors at the line") {
  CountingProvider provider;
  provider.fail = true;
  const auto result = run(testing::reference_program(), "x", provider);
  CHECK(result.outcome == Outcome::RuntimeError);
  CHECK(result.detail.find("30") != std::string::npos);
  CHECK(result.detail.find("backend down") != std::string::npos);
  CHECK(result.trace.size() == 2);
}

TEST_CASE("eval_expression builtins") {
  const auto program = parse_program("10 END");
  ExecutionState state(program, "scenario text");
  CHECK(std::get<std::string>(eval_expression(Expression{BuiltinCall{Builtin::Input, {}}}, state, rules())) ==
        "scenario text");
  CHECK(std::get<std::int64_t>(eval_expression(Expression{BuiltinCall{Builtin::ConflictsCount, {}}}, state,
                                               rules())) == 0);

  state.memory().declarative = {"The shop opens at 9.", "The shop opens at 10."};
  const auto pairs = std::get<PairList>(eval_expression(Expression{BuiltinCall{Builtin::DetectConflicts, {}}}, state,
                                                        rules()));
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].category() == ConflictCategory::NumericCategorical);
  CHECK(state.memory().conflicts.empty());
  CHECK_THROWS_AS(eval_expression(Expression{VariableRef{"missing"}}, state, rules()), UnboundVariable);
}

TEST_CASE("DETECT_CONFLICTS statement and expression forms agree") {
  const auto program = parse_program("10 END");
  ExecutionState expr_state(program, "");
  ExecutionState stmt_state(program, "");
  for (auto* state : {&expr_state, &stmt_state}) {
    state->memory().declarative = {"The shop opens at 9.", "The shop opens at 10.", "The sky is clear."};
  }
  const BuiltinCall call{Builtin::DetectConflicts, {}};
  const auto pairs = std::get<PairList>(eval_expression(Expression{call}, expr_state, rules()));
  execute_call_statement(call, stmt_state, rules());
  CHECK(stmt_state.memory().conflicts == pairs);
  CHECK(expr_state.memory().conflicts.empty());

  execute_call_statement(call, stmt_state, rules());
  CHECK(stmt_state.memory().conflicts.size() == 1);

  ExecutionState clean(program, "");
  clean.memory().declarative = {"Water boils."};
  execute_call_statement(call, clean, rules());
  CHECK(clean.memory().conflicts.empty());
  CHECK_THROWS_AS(execute_call_statement(BuiltinCall{Builtin::Input, {}}, clean, rules()), Error);
}

TEST_CASE("RESOLVE_CONFLICTS merges, clears and records") {
  const auto program = parse_program("10 END");
  ExecutionState state(program, "");
  state.memory().declarative = {"Cats purr.", "The alarm always rings.", "Water boils.", "The alarm sometimes rings."};
  state.memory().conflicts = {ConflictPair("The alarm always rings.", "The alarm sometimes rings.",
                                           ConflictCategory::AbsoluteQualified)};
  const auto value = eval_expression(Expression{BuiltinCall{Builtin::ResolveConflicts, {}}}, state, rules());
  const auto& summary = std::get<std::string>(value);
  CHECK(summary.find("usually") != std::string::npos);
  CHECK(summary.find("sometimes") != std::string::npos);
  CHECK(state.memory().conflicts.empty());
  CHECK(state.memory().resolution == summary);
  CHECK(state.memory().declarative ==
        std::vector<std::string>{"Cats purr.", "The alarm usually rings, but sometimes not.", "Water boils."});
}

TEST_CASE("RESOLVE_CONFLICTS with nothing to resolve leaves memory alone") {
  CountingProvider provider;
  const auto result = run(parse_program("10 RESOLVE_CONFLICTS()\n20 x = RESOLVE_CONFLICTS()\n30 END"), "", provider);
  CHECK(result.outcome == Outcome::Completed);
  CHECK(provider.calls == 0);
  CHECK(result.final_memory == new_memory());
}

TEST_CASE("PRINT output is collected and leaves memory alone") {
  const auto result =
      run(parse_program("10 PRINT \"hello\"\n20 LET working = INPUT()\n30 PRINT working\n40 PRINT CONFLICTS_COUNT()\n50 END"),
          "abc", rules());
  CHECK(result.print_output == std::vector<std::string>{"hello", "abc", "0"});
  CHECK(result.trace[0].memory == new_memory());
  CHECK(result.trace[0].output == "hello");
  CHECK(result.trace[0].rationale.find("hello") != std::string::npos);
  CHECK(render_trace(result).find("OUTPUT: abc") != std::string::npos);
}

TEST_CASE("ADD into memory fields and type errors") {
  const auto result = run(
      parse_program("10 LET working = INPUT()\n20 r = EXTRACT_PROCEDURAL(working)\n30 ADD procedural FROM r\n"
                    "40 ADD procedural FROM r\n50 END"),
      "Close the door. The door is red.", rules());
  CHECK(result.final_memory.procedural == std::vector<std::string>{"Close the door."});
  CHECK(result.trace[3].rationale.find("Skipped 1 duplicate") != std::string::npos);

  const auto bad = run(parse_program("10 x = 5\n20 ADD declarative FROM x\n30 END"), "", rules());
  CHECK(bad.outcome == Outcome::RuntimeError);
  const auto bad_assign = run(parse_program("10 working = 5\n20 END"), "", rules());
  CHECK(bad_assign.outcome == Outcome::RuntimeError);
}

TEST_CASE("render_trace of a one-line program") {
  const auto result = run(parse_program("10 END"), "", rules());
  CHECK(render_trace(result) ==
        "LINE 10: END\nRATIONALE: Reached END; execution finished.\nMEMORY:\nworking:\ndeclarative:\nprocedural:\n"
        "conflicts:\nresolution:\nNEXT: END\n\nFINAL MEMORY\nworking:\ndeclarative:\nprocedural:\nconflicts:\n"
        "resolution:\n");
}

TEST_CASE("render_trace reports unfinished runs") {
  const auto result = run(parse_program("10 GOTO 10"), "", rules(), RunLimits{2});
  CHECK(render_trace(result).find("OUTCOME: step-limit-exceeded") != std::string::npos);
}

TEST_CASE("runs are deterministic") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto program = testing::random_runnable_program(rng);
    const auto scenario = testing::random_scenario(rng);
    CHECK(run(program, scenario, rules(), RunLimits{200}) == run(program, scenario, rules(), RunLimits{200}));
  }
}
