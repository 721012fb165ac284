#pragma once

// Command-line front end: solve, wave, sample, ml, transform, ffnn and
// list-presets.

#include <iosfwd>
#include <string>
#include <vector>

namespace fracmc::cli {

/// Environment variable holding the default --seed.
inline constexpr const char* kSeedEnv = "FRACMC_SEED";

/// Runs a command line (without the program name). Tabular output goes to
/// --output or `out`; errors are written to `err` as one JSON object.
/// Returns 0 on success, 1 for user errors, 2 for numerical failures.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// 17 significant digits, locale-independent; "nan", "inf", "-inf".
[[nodiscard]] std::string format_number(double v);

}  // namespace fracmc::cli
