#include <doctest.h>

#include <map>
#include <set>

#include <json.hpp>

#include "cogbasic/bench.hpp"
#include "cogbasic/errors.hpp"
#include "cogbasic/rules.hpp"
#include "fixtures.hpp"

using namespace cogbasic;

namespace {

const RuleProvider& rules() {
  static const RuleProvider provider;
  return provider;
}

Scenario sky_scenario() {
  Scenario s;
  s.id = "x-01";
  s.text = "The sky is clear. The sky is not clear.";
  s.category = ConflictCategory::Negation;
  s.expected_a = {"sky", "clear"};
  s.expected_b = {"sky", "not", "clear"};
  s.resolution_keywords = {"uncertain", "sky"};
  return s;
}

ScoreCard card(std::string id, int d, int c, int r, bool control = false) {
  ScoreCard out;
  out.scenario_id = std::move(id);
  out.d = d;
  out.c = c;
  out.r = r;
  out.full_chain = d && c && r;
  out.control = control;
  return out;
}

}  // namespace

TEST_CASE("shipped suite composition") {
  const auto suite = builtin_suite();
  REQUIRE(suite.size() == 30);
  std::map<std::string, int> per_category;
  int controls = 0;
  std::set<std::string> ids;
  for (const auto& s : suite) {
    ids.insert(s.id);
    if (s.control) {
      ++controls;
      CHECK_FALSE(s.category.has_value());
    } else {
      REQUIRE(s.category.has_value());
      ++per_category[std::string(to_string(*s.category))];
    }
  }
  CHECK(ids.size() == 30);
  CHECK(controls == 5);
  CHECK(per_category["absolute-qualified"] == 9);
  CHECK(per_category["negation"] == 8);
  CHECK(per_category["numeric-categorical"] == 8);
  CHECK(load_suite(COGBASIC_SOURCE_DIR "/data/suite_v1").size() == 30);
}

TEST_CASE("each conflict scenario yields one pair of its labelled category") {
  const auto program = testing::reference_program();
  for (const auto& s : builtin_suite()) {
    INFO(s.id);
    const auto facts = rules().extract_declarative(s.text);
    const auto pairs = rules().detect_conflicts(facts);
    if (s.control) {
      CHECK(pairs.empty());
      const auto result = run(program, s.text, rules());
      CHECK(result.trace.back().line == 80);
      CHECK(result.final_memory.resolution.empty());
    } else {
      REQUIRE(pairs.size() == 1);
      CHECK(pairs[0].category() == *s.category);
    }
  }
}

TEST_CASE("rule provider calibration") {
  const auto report = run_suite(builtin_suite(), interpreter_runner(testing::reference_program(), rules()), "rules");
  CHECK(report.cards.size() == 30);
  CHECK(report.scored == 25);
  CHECK(report.means.d == 100);
  CHECK(report.means.c == 100);
  CHECK(report.means.r == 100);
  CHECK(report.means.full_chain == 100);
  for (const auto& c : report.cards) {
    INFO(c.scenario_id << ": " << c.notes);
    CHECK(c.full_chain == 1);
  }
  CHECK(std::is_sorted(report.cards.begin(), report.cards.end(),
                       [](const ScoreCard& x, const ScoreCard& y) { return x.scenario_id < y.scenario_id; }));
}

TEST_CASE("table layout") {
  SuiteReport report;
  report.label = "granite3.3";
  for (int i = 0; i < 25; ++i) {
    const std::string id = "s" + std::to_string(100 + i);
    report.cards.push_back(card(id, 1, i < 23 ? 1 : 0, i == 22 || i == 24 ? 0 : 1));
  }
  // 25 D, 23 C, 23 R, 22 full chains.
  report.means = compute_means(report.cards, &report.scored);
  CHECK(report.scored == 25);
  const auto table = render_report_table({report});
  CHECK(table ==
        "Model          D     C     R  Full Chain\n"
        "granite3.3  1.00  0.92  0.92        0.88\n");
}

TEST_CASE("means and hundredths") {
  CHECK(mean_hundredths(23, 25) == 92);
  CHECK(mean_hundredths(2, 3) == 67);
  CHECK(mean_hundredths(1, 8) == 13);
  CHECK(mean_hundredths(0, 0) == 0);
  CHECK(format_hundredths(100) == "1.00");
  CHECK(format_hundredths(7) == "0.07");
  std::size_t scored = 0;
  const auto means = compute_means({card("a", 1, 1, 1), card("b", 1, 0, 0), card("c", 1, 0, 0, true)}, &scored);
  CHECK(scored == 2);
  CHECK(means.c == 50);
  const auto only_controls = compute_means({card("c", 1, 1, 0, true)}, &scored);
  CHECK(scored == 1);
  CHECK(only_controls.r == 0);
}

TEST_CASE("keyword matching") {
  CHECK(keywords_match("The Sky is NOT clear.", {"sky", "not"}));
  CHECK_FALSE(keywords_match("The skyline is clear.", {"sky"}));
  CHECK(keywords_match("The alarm isn't loud.", {"isnt"}));
  CHECK(keywords_match("It is uncertain between 9 and 10.", {"uncertain between"}));
  CHECK_FALSE(keywords_match("between uncertain", {"uncertain between"}));
  CHECK(keywords_match("anything", {}));
}

TEST_CASE("scoring cases") {
  const auto s = sky_scenario();
  const auto result = run(testing::reference_program(), s.text, rules());
  CHECK(score_run(s, observe(result)) == card("x-01", 1, 1, 1));

  SUBCASE("extracted but the detector missed a paraphrase") {
    RunObservation run;
    run.declarative_seen = {"The sky is clear.", "The sky is not clear."};
    run.final_memory.declarative = run.declarative_seen;
    const auto scored = score_run(s, run);
    CHECK(scored.d == 1);
    CHECK(scored.c == 0);
    CHECK(scored.r == 0);
    CHECK(scored.full_chain == 0);
  }
  SUBCASE("conflicts left in place") {
    auto obs = observe(result);
    obs.final_memory.conflicts = obs.peak_conflicts;
    CHECK(score_run(s, obs).r == 0);
    CHECK(score_run(s, obs).notes.find("conflicts not cleared") != std::string::npos);
  }
  SUBCASE("detected pair in reverse orientation") {
    auto obs = observe(result);
    obs.peak_conflicts = {ConflictPair(obs.peak_conflicts[0].b(), obs.peak_conflicts[0].a())};
    CHECK(score_run(s, obs).c == 1);
  }
  SUBCASE("resolution without keywords") {
    auto obs = observe(result);
    obs.final_memory.resolution = "Something else entirely.";
    CHECK(score_run(s, obs).r == 0);
  }
}

TEST_CASE("scores never decrease as the run gets closer to the expectation") {
  const auto s = sky_scenario();
  RunObservation obs;
  const auto step0 = score_run(s, obs);
  obs.declarative_seen = {"The sky is clear.", "The sky is not clear."};
  const auto step1 = score_run(s, obs);
  obs.peak_conflicts = {ConflictPair("The sky is clear.", "The sky is not clear.")};
  const auto step2 = score_run(s, obs);
  obs.final_memory.resolution = "It is uncertain whether the sky is clear.";
  const auto step3 = score_run(s, obs);
  const std::vector<ScoreCard> steps{step0, step1, step2, step3};
  for (std::size_t i = 1; i < steps.size(); ++i) {
    CHECK(steps[i].d >= steps[i - 1].d);
    CHECK(steps[i].c >= steps[i - 1].c);
    CHECK(steps[i].r >= steps[i - 1].r);
    CHECK(steps[i].full_chain >= steps[i - 1].full_chain);
  }
  CHECK(step3.full_chain == 1);
}

TEST_CASE("control scenarios") {
  Scenario control;
  control.id = "ctl";
  control.control = true;
  RunObservation clean;
  CHECK(score_run(control, clean) == card("ctl", 1, 1, 1, true));
  RunObservation noisy;
  noisy.peak_conflicts = {ConflictPair("a", "b")};
  CHECK(score_run(control, noisy).c == 0);
}

TEST_CASE("failing runners score zero") {
  const std::vector<Scenario> suite{sky_scenario()};
  const auto report =
      run_suite(suite, [](const Scenario&) -> RunObservation { throw Error("endpoint down"); }, "broken");
  REQUIRE(report.cards.size() == 1);
  CHECK(report.cards[0].d + report.cards[0].c + report.cards[0].r + report.cards[0].full_chain == 0);
  CHECK(report.cards[0].notes.find("endpoint down") != std::string::npos);

  const auto looping = parse_program("10 GOTO 10");
  const auto limited = run_suite(suite, interpreter_runner(looping, rules(), RunLimits{5}), "loop");
  CHECK(limited.cards[0].full_chain == 0);
}

TEST_CASE("suite reports are deterministic") {
  const auto runner = interpreter_runner(testing::reference_program(), rules());
  const auto first = run_suite(builtin_suite(), runner, "rules", 4);
  const auto second = run_suite(builtin_suite(), runner, "rules", 1);
  CHECK(first.cards == second.cards);
  const auto j = nlohmann::json::parse(report_json(first));
  CHECK(j.at("means").at("full_chain") == "1.00");
  CHECK(j.at("scenarios").size() == 30);
}

TEST_CASE("suite parsing errors") {
  CHECK_THROWS_AS(parse_suite("{\"id\": \"a\", \"text\": \"t\", \"category\": \"nope\", \"expected_a\": [\"x\"], "
                              "\"expected_b\": [\"y\"]}"),
                  Error);
  CHECK_THROWS_AS(parse_suite("not json"), Error);
  const std::string ok = "{\"id\": \"a\", \"text\": \"t\", \"category\": null, \"control\": true}\n";
  CHECK(parse_suite(ok).size() == 1);
  CHECK_THROWS_AS(parse_suite(ok + ok), Error);
}
