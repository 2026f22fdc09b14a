#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ecp::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_numerical = 3;

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ecp::cli
