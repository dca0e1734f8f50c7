#pragma once

#include <iosfwd>

namespace egt::runner {

/// Exit codes of the command-line runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  ///< I/O or computation error
inline constexpr int kExitUsage = 2;    ///< bad arguments or an invalid spec

/// `egtlab <nash|evolve|basins|repeated|sweep|spatial> --spec FILE [--seed N]
/// [--samples N] [--out DIR] [--threads N]`. A JSON status document goes to
/// `out` on success and to `err` on failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace egt::runner
