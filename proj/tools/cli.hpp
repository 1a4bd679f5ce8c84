#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lehmer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitBudget = 3;

/// Runs one lehmer-lab invocation. args excludes the program name. Data goes
/// to out (or --out), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lehmer::cli
