#include "cogbasic/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cogbasic/assets.hpp"
#include "cogbasic/bench.hpp"
#include "cogbasic/conformance.hpp"
#include "cogbasic/errors.hpp"
#include "cogbasic/interpreter.hpp"
#include "cogbasic/llm.hpp"
#include "cogbasic/parser.hpp"
#include "cogbasic/rules.hpp"
#include "cogbasic/trace_io.hpp"

namespace cogbasic {

namespace {

struct Options {
  std::string program_path;
  std::string scenario_path;
  std::string text;
  bool text_given = false;
  std::string provider = "rules";
  std::string endpoint;
  std::string model;
  std::size_t step_limit = kDefaultStepLimit;
  std::string trace_out;
  std::string out_path;
  std::string suite_path;
  std::string interpreter_file;
  std::string label;
  std::size_t parallel = 4;
  int verbose = 0;
  bool quiet = false;
  std::string trace_path;
  std::vector<std::string> fmt_paths;
  bool fmt_stdout = false;
  bool fmt_check = false;

  int verbosity() const { return quiet ? 0 : std::min(1 + verbose, 2); }
};

// Reported with exit code 1.
struct ConfigError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read " + std::string(what) + " '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) {
    throw ConfigError("cannot write '" + path + "'");
  }
}

std::string trim_trailing_newlines(std::string text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
    text.pop_back();
  }
  return text;
}

Program load_program(const Options& options) {
  if (options.program_path.empty()) {
    return parse_program(assets::conflict_resolution_program());
  }
  return parse_program(read_file(options.program_path, "program"));
}

std::string load_scenario(const Options& options) {
  if (options.text_given && !options.scenario_path.empty()) {
    throw ConfigError("give either --scenario or --text, not both");
  }
  if (options.text_given) {
    return options.text;
  }
  if (options.scenario_path.empty()) {
    throw ConfigError("a scenario is required (--scenario FILE or --text \"...\")");
  }
  return trim_trailing_newlines(read_file(options.scenario_path, "scenario"));
}

EndpointConfig endpoint_config(const Options& options) {
  EndpointConfig config;
  config.base_url = options.endpoint;
  config.model = options.model;
  apply_environment(config);
  if (config.base_url.empty()) {
    throw ConfigError("provider '" + options.provider + "' needs an endpoint (--endpoint or COGBASIC_LLM_URL)");
  }
  if (config.model.empty()) {
    throw ConfigError("provider '" + options.provider + "' needs a model name (--model or COGBASIC_LLM_MODEL)");
  }
  config.max_in_flight = std::max<std::size_t>(options.parallel, 1);
  try {
    config.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return config;
}

std::string interpreter_file_text(const Options& options) {
  if (options.interpreter_file.empty()) {
    return std::string(assets::interpreter_file_v1());
  }
  return read_file(options.interpreter_file, "interpreter file");
}

LlmLog make_log(const Options& options, std::ostream& err) {
  if (options.verbosity() < 2) {
    return {};
  }
  auto mutex = std::make_shared<std::mutex>();
  return [mutex, &err](std::string_view line) {
    std::lock_guard lock(*mutex);
    err << "[llm] " << line << '\n';
  };
}

std::unique_ptr<CognitiveOps> make_provider(const Options& options, std::ostream& err) {
  if (options.provider == "rules") {
    return std::make_unique<RuleProvider>();
  }
  return std::make_unique<LlmProvider>(endpoint_config(options), make_log(options, err));
}

int exit_code(Outcome outcome) {
  switch (outcome) {
    case Outcome::Completed: return kExitOk;
    case Outcome::RuntimeError: return kExitRuntime;
    case Outcome::StepLimitExceeded: return kExitStepLimit;
  }
  return kExitRuntime;
}

void print_parse_error(const ParseError& e, std::ostream& err) {
  if (const auto* duplicate = dynamic_cast<const DuplicateLineError*>(&e)) {
    err << "DuplicateLineError: line number " << duplicate->line_number() << " is used more than once\n";
  } else {
    err << "ParseError:\n";
  }
  for (const auto& diag : e.diagnostics()) {
    err << "  source line " << diag.source_line;
    if (diag.line_number > 0) {
      err << " (line " << diag.line_number << ")";
    }
    err << ": " << diag.message << '\n';
  }
}

int cmd_run_in_model(const Options& options, const Program& program, const std::string& scenario, std::ostream& out,
                     std::ostream& err) {
  const auto config = endpoint_config(options);
  const auto log = make_log(options, err);
  std::string reply;
  try {
    reply = llm_call(config, interpreter_file_text(options), build_in_model_prompt(program, scenario), log);
  } catch (const LlmError& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  if (!options.trace_out.empty()) {
    write_file(options.trace_out, reply);
  }
  ModelTrace trace;
  try {
    trace = parse_model_trace(reply);
  } catch (const TraceParseError& e) {
    err << "error: " << e.what() << '\n';
    if (options.verbosity() >= 1) {
      out << reply << '\n';
    }
    return kExitRuntime;
  }
  if (options.verbosity() >= 1) {
    out << reply;
    if (!reply.empty() && reply.back() != '\n') {
      out << '\n';
    }
  } else {
    out << render_final_memory(trace.final_memory);
  }
  const auto violations = check_conformance(program, trace);
  for (const auto& violation : violations) {
    err << "conformance: " << format_violation(violation, trace) << '\n';
  }
  return kExitOk;
}

int cmd_run(const Options& options, std::ostream& out, std::ostream& err) {
  const Program program = load_program(options);
  const std::string scenario = load_scenario(options);
  if (options.provider == "llm-inmodel") {
    return cmd_run_in_model(options, program, scenario, out, err);
  }
  const auto provider = make_provider(options, err);
  const RunResult result = run(program, scenario, *provider, RunLimits{options.step_limit});
  if (options.verbosity() >= 1) {
    out << render_trace(result);
  } else {
    for (const auto& line : result.print_output) {
      out << line << '\n';
    }
    out << render_final_memory(result.final_memory);
  }
  if (!options.trace_out.empty()) {
    write_file(options.trace_out, write_trace_jsonl(result));
  }
  if (result.outcome != Outcome::Completed) {
    err << to_string(result.outcome) << ": " << result.detail << '\n';
  }
  return exit_code(result.outcome);
}

int cmd_step(const Options& options, std::istream& in, std::ostream& out, std::ostream& err) {
  if (options.provider == "llm-inmodel") {
    throw ConfigError("step executes statements one at a time; use --provider rules or llm");
  }
  const Program program = load_program(options);
  const std::string scenario = load_scenario(options);
  const auto provider = make_provider(options, err);
  ExecutionState state(program, scenario, RunLimits{options.step_limit});
  bool continuous = false;

  const auto finish = [&](int code) {
    out << render_final_memory(state.memory());
    out.flush();
    return code;
  };

  while (state.status() == Status::Running) {
    if (state.steps_taken() >= options.step_limit) {
      err << "step-limit-exceeded: step limit of " << options.step_limit << " reached at line "
          << state.current_line() << '\n';
      return finish(kExitStepLimit);
    }
    if (!continuous) {
      err << "[line " << state.current_line() << "] Enter=step  m=memory  c=continue  q=quit > ";
      err.flush();
      std::string command;
      if (!std::getline(in, command)) {
        err << '\n';
        return finish(kExitOk);
      }
      while (!command.empty() && (command.back() == '\r' || command.back() == ' ')) {
        command.pop_back();
      }
      if (command == "q") {
        return finish(kExitOk);
      }
      if (command == "m") {
        out << render_memory_fields(state.memory());
        continue;
      }
      if (command == "c") {
        continuous = true;
      } else if (!command.empty()) {
        err << "unknown command '" << command << "'\n";
        continue;
      }
    }
    try {
      const TraceEntry entry = step(state, *provider);
      out << render_entry(entry) << '\n';
    } catch (const RuntimeError& e) {
      err << "runtime-error: " << e.what() << '\n';
      return finish(kExitRuntime);
    }
  }
  if (state.status() == Status::Failed) {
    err << "runtime-error: " << state.failure() << '\n';
    return finish(kExitRuntime);
  }
  return finish(kExitOk);
}

int cmd_bench(const Options& options, std::ostream& out, std::ostream& err) {
  const auto suite = options.suite_path.empty() ? builtin_suite() : [&] {
    try {
      return load_suite(options.suite_path);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }();
  if (suite.empty()) {
    throw ConfigError("the suite has no scenarios");
  }
  const Program program = load_program(options);
  const RunLimits limits{options.step_limit};

  SuiteReport report;
  if (options.provider == "llm-inmodel") {
    const auto config = endpoint_config(options);
    const auto interpreter = interpreter_file_text(options);
    const auto log = make_log(options, err);
    ScenarioRunner runner = [&](const Scenario& scenario) {
      return observe(run_in_model(config, interpreter, program, scenario.text, log));
    };
    report = run_suite(suite, runner, options.label.empty() ? config.model : options.label, options.parallel);
  } else {
    const auto provider = make_provider(options, err);
    std::string label = options.label;
    if (label.empty()) {
      label = options.provider == "rules" ? "rules" : static_cast<const LlmProvider&>(*provider).config().model;
    }
    report = run_suite(suite, interpreter_runner(program, *provider, limits), label, options.parallel);
  }

  out << render_report_table({report});
  if (options.verbosity() >= 1) {
    for (const auto& card : report.cards) {
      if (!card.full_chain || options.verbosity() >= 2) {
        out << card.scenario_id << ": D=" << card.d << " C=" << card.c << " R=" << card.r
            << (card.control ? " (control)" : "") << (card.notes.empty() ? "" : "  " + card.notes) << '\n';
      }
    }
  }
  if (!options.out_path.empty()) {
    write_file(options.out_path, report_json(report) + "\n");
  }
  return kExitOk;
}

int cmd_check_trace(const Options& options, std::ostream& out) {
  const Program program = load_program(options);
  const std::string text = read_file(options.trace_path, "trace");
  ModelTrace trace;
  try {
    trace = read_trace(text);
  } catch (const TraceParseError& e) {
    throw ConfigError(e.what());
  }
  const auto violations = check_conformance(program, trace);
  if (violations.empty()) {
    out << "conformant: " << trace.entries.size() << " entries, no violations\n";
    return kExitOk;
  }
  for (const auto& violation : violations) {
    out << format_violation(violation, trace) << '\n';
  }
  out << violations.size() << " violation(s)\n";
  return kExitRuntime;
}

int cmd_fmt(const Options& options, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  for (const auto& path : options.fmt_paths) {
    const std::string source = read_file(path, "program");
    const std::string canonical = format_program(parse_program(source)) + "\n";
    if (options.fmt_stdout) {
      out << canonical;
    } else if (options.fmt_check) {
      if (canonical != source) {
        out << path << ": not in canonical form\n";
        code = kExitRuntime;
      }
    } else if (canonical != source) {
      write_file(path, canonical);
      if (options.verbosity() >= 1) {
        err << "formatted " << path << '\n';
      }
    }
  }
  return code;
}

void add_program_option(CLI::App& command, Options& options, bool required) {
  auto* opt = command.add_option("--program", options.program_path, "Cognitive BASIC program file");
  if (required) {
    opt->required();
  }
}

void add_provider_options(CLI::App& command, Options& options) {
  command.add_option("--provider", options.provider, "Cognitive operations: rules, llm or llm-inmodel")
      ->check(CLI::IsMember({"rules", "llm", "llm-inmodel"}));
  command.add_option("--endpoint", options.endpoint, "Chat-completions base URL (or COGBASIC_LLM_URL)");
  command.add_option("--model", options.model, "Model name (or COGBASIC_LLM_MODEL)");
  command.add_option("--interpreter-file", options.interpreter_file, "Interpreter file for llm-inmodel");
  command.add_option("--step-limit", options.step_limit, "Maximum executed statements")
      ->check(CLI::PositiveNumber);
}

void add_verbosity(CLI::App& command, Options& options) {
  command.add_flag("-v,--verbose", options.verbose, "More output (-vv adds LLM prompt/reply excerpts)");
  command.add_flag("-q,--quiet", options.quiet, "Print FINAL MEMORY only");
}

void add_scenario_options(CLI::App& command, Options& options) {
  command.add_option("--scenario", options.scenario_path, "Scenario text file");
  command.add_option("--text", options.text, "Inline scenario text")->each([&](const std::string&) {
    options.text_given = true;
  });
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  // Each subcommand binds its own Options.
  Options run_options, step_options, bench_options, check_options, fmt_options;
  CLI::App app{"Cognitive BASIC interpreter and benchmark", "cogbasic"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  auto* run_cmd = app.add_subcommand("run", "Execute a program on a scenario and print its trace");
  add_program_option(*run_cmd, run_options, true);
  add_scenario_options(*run_cmd, run_options);
  add_provider_options(*run_cmd, run_options);
  run_cmd->add_option("--trace-out", run_options.trace_out, "Write the machine-readable trace (JSON lines)");
  add_verbosity(*run_cmd, run_options);

  auto* step_cmd = app.add_subcommand("step", "Execute a program one statement at a time");
  add_program_option(*step_cmd, step_options, true);
  add_scenario_options(*step_cmd, step_options);
  add_provider_options(*step_cmd, step_options);
  add_verbosity(*step_cmd, step_options);

  auto* bench_cmd = app.add_subcommand("bench", "Score a provider on the scenario suite");
  add_program_option(*bench_cmd, bench_options, false);
  add_provider_options(*bench_cmd, bench_options);
  bench_cmd->add_option("--suite", bench_options.suite_path, "Scenario file or directory (default: built-in suite_v1)");
  bench_cmd->add_option("--out", bench_options.out_path, "Write JSON results");
  bench_cmd->add_option("--label", bench_options.label, "Row label in the report");
  bench_cmd->add_option("--parallel", bench_options.parallel, "Scenarios run at once")->check(CLI::PositiveNumber);
  add_verbosity(*bench_cmd, bench_options);

  auto* check_cmd = app.add_subcommand("check-trace", "Check a trace against a program's control flow");
  check_cmd->add_option("trace", check_options.trace_path, "Trace file (text or JSON lines)")->required();
  add_program_option(*check_cmd, check_options, false);

  auto* fmt_cmd = app.add_subcommand("fmt", "Rewrite programs in canonical form");
  fmt_cmd->add_option("files", fmt_options.fmt_paths, "Program files")->required();
  fmt_cmd->add_flag("--stdout", fmt_options.fmt_stdout, "Print instead of rewriting");
  fmt_cmd->add_flag("--check", fmt_options.fmt_check, "Report files that are not canonical");
  add_verbosity(*fmt_cmd, fmt_options);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_options, out, err);
    if (step_cmd->parsed()) return cmd_step(step_options, in, out, err);
    if (bench_cmd->parsed()) return cmd_bench(bench_options, out, err);
    if (check_cmd->parsed()) return cmd_check_trace(check_options, out);
    if (fmt_cmd->parsed()) return cmd_fmt(fmt_options, out, err);
  } catch (const ParseError& e) {
    print_parse_error(e, err);
    return kExitUsage;
  } catch (const LexError& e) {
    err << "LexError: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace cogbasic
