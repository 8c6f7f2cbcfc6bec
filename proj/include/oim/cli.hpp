#pragma once

#include <iosfwd>

namespace oim::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 2,
  kNoSolution = 3,
  kInternalError = 4,
};

/// Entry point for the `oim` tool: subcommands solve, enumerate, ensemble, gen.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oim::cli
