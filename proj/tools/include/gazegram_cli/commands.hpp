#pragma once

#include <iosfwd>

namespace gazegram::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Parses argv and runs one subcommand (detect | mine | layout | similarity |
/// serve). JSON goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gazegram::cli
