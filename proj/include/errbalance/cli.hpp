#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace errbalance::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 1;  // infeasible optimum, bracket or convergence failure
inline constexpr int kExitUsage = 2;       // bad flags, missing or invalid parameters

/// Runs one subcommand. args excludes the program name. Reports go to out,
/// diagnostics and usage text to err.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Renders a double with 17 significant digits.
std::string format_number(double value);

}  // namespace errbalance::cli
