#pragma once

#include <iosfwd>

namespace qaw {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitIdentityFailure = 1,
  kExitParse = 2,
  kExitPole = 3,
  kExitSampler = 4,
};

/// Runs one command line (argv[0] is the program name).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qaw
