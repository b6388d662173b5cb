#pragma once

#include <ostream>

namespace minsurf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitUsage = 2;

/// Full command-line entry point. Subcommands: generate, solve, flow,
/// density, decompose, annulus, spectra, width, verify. `--config file.json`
/// (anywhere on the line) supplies option defaults per subcommand; explicit
/// flags take precedence and unknown keys are a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace minsurf::cli
