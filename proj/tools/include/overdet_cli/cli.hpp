#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace overdet::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kGoldenMismatch = 2,
  kSolverFailure = 3,
  kPrecondition = 4,
};

/// Runs one command line (args[0] is the program name). Human-readable output
/// goes to `out`, diagnostics to `err`; files are written under --out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace overdet::cli
