#pragma once

#include <iosfwd>

namespace occ::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kInputError = 2, kIoError = 3 };

/// Runs one invocation; `out` receives results, `err` diagnostics.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace occ::cli
