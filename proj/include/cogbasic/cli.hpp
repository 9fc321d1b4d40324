#pragma once

#include <iosfwd>

namespace cogbasic {

/// Exit codes shared by the subcommands.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,        // parse, config or unreadable input
  kExitRuntime = 2,      // runtime error; conformance violations for check-trace
  kExitStepLimit = 3,
};

/// Entry point of the cogbasic command. Streams are injected for testing; `in`
/// feeds the interactive `step` subcommand.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace cogbasic
