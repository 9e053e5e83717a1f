#pragma once

#include <iosfwd>

namespace dcres::tools {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNumerical = 2,
  kExitVerification = 3,
};

/// Entry point of the `dcres` tool. Reentrant: every call builds its own
/// parser, so tests can drive it in-process.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dcres::tools
