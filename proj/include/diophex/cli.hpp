#pragma once

// The `diophex` command line: argument parsing, orchestration and exit codes
// (0 ok, 2 usage or parse error, 3 budget exceeded, 4 calibration mismatch).

#include <ostream>
#include <string>
#include <vector>

namespace diophex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitMismatch = 4;

std::string version();

/// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace diophex::cli
