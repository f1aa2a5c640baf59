#pragma once

#include <iosfwd>

namespace proxygrade {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitAxiomFails = 3;

/// Runs `proxygrade grade|rank|check ...`; writes reports to `out` and
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace proxygrade
