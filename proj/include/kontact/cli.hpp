#ifndef KONTACT_CLI_HPP
#define KONTACT_CLI_HPP

#include <iosfwd>

namespace kontact {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitInconclusive = 3 };

/// Entry point of the kontact command-line tool. Human-readable lines go to
/// out, diagnostics to err; --json writes the report to a file ("-" for out).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kontact

#endif  // KONTACT_CLI_HPP
