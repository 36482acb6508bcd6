#pragma once

#include <string>
#include <vector>

namespace westervelt {

inline constexpr const char* kVersion = "0.1.0";

/// Command-line entry point (args excludes the program name).
/// Exit codes: 0 success, 1 usage/config error, 2 solver error, 3 IO error.
int run_cli(const std::vector<std::string>& args);

}  // namespace westervelt
