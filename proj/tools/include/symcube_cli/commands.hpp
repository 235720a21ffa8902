#pragma once

#include <iosfwd>

namespace symcube::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitPrecondition = 2,
  kExitIo = 3,
};

/// Parses arguments and runs one subcommand, writing human-readable output
/// to `out` and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace symcube::cli
