#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cogbasic/cli.hpp"
#include "fixtures.hpp"
#include "stub_server.hpp"

using namespace cogbasic;
namespace fs = std::filesystem;

namespace {

const std::string kProgram = COGBASIC_SOURCE_DIR "/programs/conflict_resolution.cb";

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation cli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "cogbasic");
  std::vector<const char*> argv;
  for (const auto& arg : args) argv.push_back(arg.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  Invocation result;
  result.code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

class TempDir {
 public:
  TempDir() {
    std::random_device device;
    path_ = fs::temp_directory_path() / ("cogbasic-cli-" + std::to_string(device()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name, std::ios::binary) << text;
    return (path_ / name).string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

}  // namespace

TEST_CASE("run exit codes") {
  TempDir dir;
  const auto conflict = cli({"run", "--program", kProgram, "--text", "The sky is clear. The sky is not clear."});
  CHECK(conflict.code == kExitOk);
  CHECK(conflict.out.find("FINAL MEMORY") != std::string::npos);

  const auto duplicate = dir.write("dup.cb", "10 REM a\n10 END\n");
  const auto dup_run = cli({"run", "--program", duplicate, "--text", "x"});
  CHECK(dup_run.code == kExitUsage);
  CHECK(dup_run.err.find("10") != std::string::npos);

  const auto missing = dir.write("missing.cb", "10 GOTO 50\n");
  CHECK(cli({"run", "--program", missing, "--text", "x"}).code == kExitRuntime);

  const auto loop = dir.write("loop.cb", "10 GOTO 10\n");
  const auto looped = cli({"run", "--program", loop, "--text", "x", "--step-limit", "25"});
  CHECK(looped.code == kExitStepLimit);

  ::unsetenv("COGBASIC_LLM_URL");
  CHECK(cli({"run", "--program", kProgram, "--text", "x", "--provider", "llm"}).code == kExitUsage);
  CHECK(cli({"run", "--program", kProgram, "--provider", "bogus"}).code == kExitUsage);
  CHECK(cli({"run", "--program", dir.path("absent.cb"), "--text", "x"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
}

TEST_CASE("verbosity levels") {
  const auto quiet = cli({"run", "--program", kProgram, "--text", "The sky is clear.", "-q"});
  CHECK(quiet.out.rfind("FINAL MEMORY", 0) == 0);
  const auto verbose = cli({"run", "--program", kProgram, "--text", "The sky is clear.", "-v"});
  CHECK(verbose.out.find("LINE 80") != std::string::npos);
}

TEST_CASE("trace files and check-trace") {
  TempDir dir;
  const auto scenario = dir.write("sky.txt", "The sky is clear. The sky is not clear.");
  const auto jsonl = dir.path("trace.jsonl");
  REQUIRE(cli({"run", "--program", kProgram, "--scenario", scenario, "--trace-out", jsonl}).code == kExitOk);
  const auto trace_text = testing::read_text(jsonl);
  CHECK(trace_text.find("\"outcome\":\"completed\"") != std::string::npos);

  const auto ok = cli({"check-trace", jsonl, "--program", kProgram});
  CHECK(ok.code == kExitOk);
  CHECK(cli({"check-trace", jsonl}).code == kExitOk);

  const auto rendered = cli({"run", "--program", kProgram, "--scenario", scenario, "-v"}).out;
  CHECK(cli({"check-trace", dir.write("trace.txt", rendered)}).code == kExitOk);

  std::string mutated = rendered;
  const auto at = mutated.find("NEXT: 40");
  REQUIRE(at != std::string::npos);
  mutated.replace(at, 8, "NEXT: 50");
  const auto bad = cli({"check-trace", dir.write("bad.txt", mutated)});
  CHECK(bad.code == kExitRuntime);
  CHECK(bad.out.find("(b)") != std::string::npos);

  CHECK(cli({"check-trace", dir.write("junk.txt", "nothing here")}).code == kExitUsage);
}

TEST_CASE("fmt") {
  TempDir dir;
  const auto file = dir.write("p.cb", "20   END\n10 REM hi\n");
  const auto check_before = cli({"fmt", "--check", file});
  CHECK(check_before.code != kExitOk);
  const auto printed = cli({"fmt", "--stdout", file});
  CHECK(printed.code == kExitOk);
  CHECK(printed.out == "10 REM hi\n20 END\n");
  REQUIRE(cli({"fmt", file}).code == kExitOk);
  const auto once = testing::read_text(file);
  REQUIRE(cli({"fmt", file}).code == kExitOk);
  CHECK(testing::read_text(file) == once);
  CHECK(cli({"fmt", "--check", file}).code == kExitOk);
}

TEST_CASE("interactive stepping") {
  const std::vector<std::string> args{"step", "--program", kProgram, "--text", "The sky is clear. The sky is not clear."};
  const auto quit = cli(args, "\n\nq\n");
  CHECK(quit.code == kExitOk);
  CHECK(quit.out.find("LINE 20") != std::string::npos);
  CHECK(quit.out.find("LINE 30") == std::string::npos);
  CHECK(quit.out.find("FINAL MEMORY") != std::string::npos);

  const auto cont = cli(args, "c\n");
  CHECK(cont.code == kExitOk);
  CHECK(cont.out.find("LINE 100") != std::string::npos);
  CHECK(cont.out.find("resolution: It is uncertain whether the sky is clear.") != std::string::npos);

  const auto memory = cli(args, "\n\nm\nq\n");
  CHECK(memory.out.find("working: The sky is clear. The sky is not clear.") != std::string::npos);

  CHECK(cli(args, "").code == kExitOk);
}

TEST_CASE("bench output") {
  TempDir dir;
  const auto json_out = dir.path("bench.json");
  const auto bench = cli({"bench", "--provider", "rules", "--out", json_out});
  CHECK(bench.code == kExitOk);
  CHECK(bench.out.find("Model") != std::string::npos);
  CHECK(bench.out.find("Full Chain") != std::string::npos);
  CHECK(bench.out.find("rules  1.00  1.00  1.00        1.00") != std::string::npos);
  CHECK(testing::read_text(json_out).find("\"full_chain\": \"1.00\"") != std::string::npos);
}

TEST_CASE("the rule provider never touches the network") {
  testing::StubServer trap(testing::scripted({"- trap"}));
  ::setenv("COGBASIC_LLM_URL", trap.url().c_str(), 1);
  ::setenv("COGBASIC_LLM_MODEL", "trap", 1);
  CHECK(cli({"run", "--program", kProgram, "--text", "The sky is clear. The sky is not clear."}).code == kExitOk);
  CHECK(cli({"bench"}).code == kExitOk);
  CHECK(trap.request_count() == 0);

  CHECK(cli({"run", "--program", kProgram, "--text", "The sky is clear.", "--provider", "llm"}).code == kExitOk);
  CHECK(trap.request_count() > 0);
  ::unsetenv("COGBASIC_LLM_URL");
  ::unsetenv("COGBASIC_LLM_MODEL");
}

TEST_CASE("the installed binary runs") {
  const std::string command = std::string("\"") + COGBASIC_CLI_PATH + "\" run --program \"" + kProgram +
                              "\" --text \"The sky is clear.\" -q > /dev/null";
  CHECK(std::system(command.c_str()) == 0);
}
