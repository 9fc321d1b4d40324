#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cogbasic/interpreter.hpp"
#include "cogbasic/memory.hpp"
#include "cogbasic/trace_io.hpp"

namespace cogbasic {

struct Scenario {
  std::string id;
  std::string text;
  std::optional<ConflictCategory> category;  // nullopt for controls
  std::vector<std::string> expected_a;
  std::vector<std::string> expected_b;
  std::vector<std::string> resolution_keywords;
  bool control = false;
};

/// Reads JSON-lines scenario records. Throws Error naming the record on bad input.
std::vector<Scenario> parse_suite(std::string_view jsonl);
std::vector<Scenario> load_suite(const std::filesystem::path& path);
/// The suite compiled into the library (data/suite_v1).
std::vector<Scenario> builtin_suite();

struct ScoreCard {
  std::string scenario_id;
  int d = 0;
  int c = 0;
  int r = 0;
  int full_chain = 0;
  bool control = false;
  std::string notes;

  bool operator==(const ScoreCard&) const = default;
};

/// True when every keyword (a word or a phrase) occurs in `text`, compared
/// case-insensitively on word boundaries with punctuation ignored. An empty
/// keyword list matches anything.
bool keywords_match(std::string_view text, const std::vector<std::string>& keywords);

/// What scoring needs from one run.
struct RunObservation {
  MemoryState final_memory;
  std::vector<ConflictPair> peak_conflicts;  // largest conflicts list seen during the run
  std::vector<std::string> declarative_seen; // every fact held in declarative at some step
};

RunObservation observe(const RunResult& result);
RunObservation observe(const ModelTrace& trace);

ScoreCard score_run(const Scenario& scenario, const RunObservation& run);

/// Executes one scenario. Throws on failure; run_suite records the failure.
using ScenarioRunner = std::function<RunObservation(const Scenario&)>;

/// Wraps the interpreter; a run that does not complete counts as a failure.
/// The runner keeps its own copy of the program; `provider` must outlive it.
ScenarioRunner interpreter_runner(Program program, const CognitiveOps& provider, RunLimits limits = {});

struct Means {
  // Hundredths, rounded half-up: 92 means 0.92.
  int d = 0;
  int c = 0;
  int r = 0;
  int full_chain = 0;
};

struct SuiteReport {
  std::string label;
  std::vector<ScoreCard> cards;  // ordered by scenario id
  Means means;                   // over non-control cards (all cards if there are only controls)
  std::size_t scored = 0;        // cards included in the means
  double runtime_seconds = 0.0;
};

/// floor(100 * sum / n + 1/2) without floating point.
int mean_hundredths(std::size_t sum, std::size_t n);
/// 92 -> "0.92", 100 -> "1.00".
std::string format_hundredths(int hundredths);

Means compute_means(const std::vector<ScoreCard>& cards, std::size_t* scored = nullptr);

/// Runs every scenario with up to `max_parallel` at once.
SuiteReport run_suite(const std::vector<Scenario>& suite, const ScenarioRunner& runner, std::string label,
                      std::size_t max_parallel = 4);

/// Aligned table with columns Model, D, C, R, Full Chain.
std::string render_report_table(const std::vector<SuiteReport>& reports);
/// Machine-readable results: label, means, runtime and every card.
std::string report_json(const SuiteReport& report);

}  // namespace cogbasic
