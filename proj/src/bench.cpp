#include "cogbasic/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cogbasic/assets.hpp"
#include "cogbasic/errors.hpp"
#include "text_util.hpp"

namespace cogbasic {

namespace {

using json = nlohmann::json;

// Lowercase words with punctuation dropped; apostrophes vanish so "isn't"
// becomes "isnt" on both sides of a comparison.
std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (c == '\'') {
      continue;
    }
    if (std::isalnum(c) || c >= 0x80) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) {
    out.push_back(std::move(current));
  }
  return out;
}

bool contains_phrase(const std::vector<std::string>& haystack, const std::vector<std::string>& phrase) {
  if (phrase.empty()) {
    return true;
  }
  return std::search(haystack.begin(), haystack.end(), phrase.begin(), phrase.end()) != haystack.end();
}

bool any_matches(const std::vector<std::string>& items, const std::vector<std::string>& keywords) {
  return std::any_of(items.begin(), items.end(),
                     [&](const std::string& item) { return keywords_match(item, keywords); });
}

std::vector<std::string> string_list(const json& record, const char* field) {
  if (!record.contains(field) || record.at(field).is_null()) {
    return {};
  }
  return record.at(field).get<std::vector<std::string>>();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunObservation gather(const MemoryState& final_memory, const std::vector<const MemoryState*>& snapshots) {
  RunObservation run{final_memory, {}, {}};
  for (const MemoryState* memory : snapshots) {
    if (!memory) {
      continue;
    }
    if (memory->conflicts.size() > run.peak_conflicts.size()) {
      run.peak_conflicts = memory->conflicts;
    }
    for (const auto& fact : memory->declarative) {
      if (std::find(run.declarative_seen.begin(), run.declarative_seen.end(), fact) == run.declarative_seen.end()) {
        run.declarative_seen.push_back(fact);
      }
    }
  }
  return run;
}

}  // namespace

std::vector<Scenario> parse_suite(std::string_view jsonl) {
  std::vector<Scenario> suite;
  const auto lines = detail::split_lines(jsonl);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = detail::trim(lines[i]);
    if (line.empty()) {
      continue;
    }
    const std::string where = "scenario record " + std::to_string(i + 1);
    Scenario scenario;
    try {
      const json record = json::parse(line);
      scenario.id = record.at("id").get<std::string>();
      scenario.text = record.at("text").get<std::string>();
      scenario.control = record.value("control", false);
      if (record.contains("category") && !record.at("category").is_null()) {
        const auto name = record.at("category").get<std::string>();
        if (name != "none") {
          scenario.category = conflict_category_from_name(name);
          if (!scenario.category) {
            throw Error(where + ": unknown category '" + name + "'");
          }
        }
      }
      scenario.expected_a = string_list(record, "expected_a");
      scenario.expected_b = string_list(record, "expected_b");
      scenario.resolution_keywords = string_list(record, "resolution_keywords");
    } catch (const json::exception& e) {
      throw Error(where + ": " + e.what());
    }
    if (scenario.id.empty()) {
      throw Error(where + ": empty id");
    }
    if (scenario.category && (scenario.expected_a.empty() || scenario.expected_b.empty())) {
      throw Error(where + " (" + scenario.id + "): a conflict scenario needs expected_a and expected_b keywords");
    }
    if (scenario.control && scenario.category) {
      throw Error(where + " (" + scenario.id + "): a control scenario cannot have a conflict category");
    }
    const bool duplicate = std::any_of(suite.begin(), suite.end(),
                                       [&](const Scenario& other) { return other.id == scenario.id; });
    if (duplicate) {
      throw Error(where + ": duplicate id '" + scenario.id + "'");
    }
    suite.push_back(std::move(scenario));
  }
  return suite;
}

std::vector<Scenario> load_suite(const std::filesystem::path& path) {
  auto target = path;
  if (std::filesystem::is_directory(target)) {
    target /= "scenarios.jsonl";
  }
  return parse_suite(read_file(target));
}

std::vector<Scenario> builtin_suite() { return parse_suite(assets::suite_v1()); }

bool keywords_match(std::string_view text, const std::vector<std::string>& keywords) {
  const auto haystack = words(text);
  return std::all_of(keywords.begin(), keywords.end(),
                     [&](const std::string& keyword) { return contains_phrase(haystack, words(keyword)); });
}

RunObservation observe(const RunResult& result) {
  std::vector<const MemoryState*> snapshots;
  for (const auto& entry : result.trace) {
    snapshots.push_back(&entry.memory);
  }
  snapshots.push_back(&result.final_memory);
  return gather(result.final_memory, snapshots);
}

RunObservation observe(const ModelTrace& trace) {
  std::vector<const MemoryState*> snapshots;
  for (const auto& entry : trace.entries) {
    snapshots.push_back(entry.memory ? &*entry.memory : nullptr);
  }
  snapshots.push_back(&trace.final_memory);
  return gather(trace.final_memory, snapshots);
}

ScoreCard score_run(const Scenario& scenario, const RunObservation& run) {
  ScoreCard card;
  card.scenario_id = scenario.id;
  card.control = scenario.control;
  const auto& memory = run.final_memory;

  if (scenario.control) {
    card.d = 1;
    card.c = run.peak_conflicts.empty() ? 1 : 0;
    card.r = memory.resolution.empty() ? 1 : 0;
    if (!card.c) {
      card.notes = "conflicts were reported for a control scenario";
    } else if (!card.r) {
      card.notes = "resolution was written for a control scenario";
    }
  } else {
    const auto& seen = run.declarative_seen.empty() ? memory.declarative : run.declarative_seen;
    card.d = any_matches(seen, scenario.expected_a) && any_matches(seen, scenario.expected_b) ? 1 : 0;
    card.c = std::any_of(run.peak_conflicts.begin(), run.peak_conflicts.end(),
                         [&](const ConflictPair& pair) {
                           return (keywords_match(pair.a(), scenario.expected_a) &&
                                   keywords_match(pair.b(), scenario.expected_b)) ||
                                  (keywords_match(pair.b(), scenario.expected_a) &&
                                   keywords_match(pair.a(), scenario.expected_b));
                         })
                 ? 1
                 : 0;
    card.r = !memory.resolution.empty() && memory.conflicts.empty() &&
                     keywords_match(memory.resolution, scenario.resolution_keywords)
                 ? 1
                 : 0;
    std::vector<std::string> notes;
    if (!card.d) notes.push_back("expected facts missing from declarative");
    if (!card.c) notes.push_back("no matching conflict pair detected");
    if (!card.r) {
      if (memory.resolution.empty()) {
        notes.push_back("resolution empty");
      } else if (!memory.conflicts.empty()) {
        notes.push_back("conflicts not cleared");
      } else {
        notes.push_back("resolution lacks expected keywords");
      }
    }
    for (const auto& note : notes) {
      card.notes += card.notes.empty() ? note : "; " + note;
    }
  }
  card.full_chain = card.d && card.c && card.r ? 1 : 0;
  return card;
}

ScenarioRunner interpreter_runner(Program program, const CognitiveOps& provider, RunLimits limits) {
  return [program = std::move(program), &provider, limits](const Scenario& scenario) {
    const RunResult result = run(program, scenario.text, provider, limits);
    if (result.outcome != Outcome::Completed) {
      throw Error(std::string(to_string(result.outcome)) + (result.detail.empty() ? "" : ": " + result.detail));
    }
    return observe(result);
  };
}

int mean_hundredths(std::size_t sum, std::size_t n) {
  if (n == 0) {
    return 0;
  }
  return static_cast<int>((200 * sum + n) / (2 * n));
}

std::string format_hundredths(int hundredths) {
  std::ostringstream out;
  out << hundredths / 100 << '.' << std::setw(2) << std::setfill('0') << hundredths % 100;
  return out.str();
}

Means compute_means(const std::vector<ScoreCard>& cards, std::size_t* scored) {
  const bool any_conflict = std::any_of(cards.begin(), cards.end(), [](const ScoreCard& c) { return !c.control; });
  std::size_t n = 0, d = 0, c = 0, r = 0, full = 0;
  for (const auto& card : cards) {
    if (any_conflict && card.control) {
      continue;
    }
    ++n;
    d += card.d;
    c += card.c;
    r += card.r;
    full += card.full_chain;
  }
  if (scored) {
    *scored = n;
  }
  return Means{mean_hundredths(d, n), mean_hundredths(c, n), mean_hundredths(r, n), mean_hundredths(full, n)};
}

SuiteReport run_suite(const std::vector<Scenario>& suite, const ScenarioRunner& runner, std::string label,
                      std::size_t max_parallel) {
  const auto started = std::chrono::steady_clock::now();
  std::vector<ScoreCard> cards(suite.size());
  std::atomic<std::size_t> next{0};

  const auto work = [&] {
    for (std::size_t i = next++; i < suite.size(); i = next++) {
      const Scenario& scenario = suite[i];
      try {
        cards[i] = score_run(scenario, runner(scenario));
      } catch (const std::exception& e) {
        ScoreCard failed;
        failed.scenario_id = scenario.id;
        failed.control = scenario.control;
        failed.notes = std::string("run failed: ") + e.what();
        cards[i] = std::move(failed);
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(max_parallel, 1, std::max<std::size_t>(suite.size(), 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < workers; ++i) {
      threads.emplace_back(work);
    }
    for (auto& thread : threads) {
      thread.join();
    }
  }

  std::sort(cards.begin(), cards.end(),
            [](const ScoreCard& x, const ScoreCard& y) { return x.scenario_id < y.scenario_id; });
  SuiteReport report;
  report.label = std::move(label);
  report.cards = std::move(cards);
  report.means = compute_means(report.cards, &report.scored);
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::string render_report_table(const std::vector<SuiteReport>& reports) {
  const std::vector<std::string> header{"Model", "D", "C", "R", "Full Chain"};
  std::vector<std::vector<std::string>> rows{header};
  for (const auto& report : reports) {
    rows.push_back({report.label, format_hundredths(report.means.d), format_hundredths(report.means.c),
                    format_hundredths(report.means.r), format_hundredths(report.means.full_chain)});
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == 0) {
        line += row[i] + std::string(widths[i] - row[i].size(), ' ');
      } else {
        line += "  " + std::string(widths[i] - row[i].size(), ' ') + row[i];
      }
    }
    out << line << '\n';
  }
  return out.str();
}

std::string report_json(const SuiteReport& report) {
  json cards = json::array();
  for (const auto& card : report.cards) {
    cards.push_back(json{{"id", card.scenario_id},
                         {"d", card.d},
                         {"c", card.c},
                         {"r", card.r},
                         {"full_chain", card.full_chain},
                         {"control", card.control},
                         {"notes", card.notes}});
  }
  json out{{"label", report.label},
           {"means",
            {{"D", format_hundredths(report.means.d)},
             {"C", format_hundredths(report.means.c)},
             {"R", format_hundredths(report.means.r)},
             {"full_chain", format_hundredths(report.means.full_chain)}}},
           {"scored", report.scored},
           {"runtime_seconds", report.runtime_seconds},
           {"scenarios", cards}};
  return out.dump(2);
}

}  // namespace cogbasic
