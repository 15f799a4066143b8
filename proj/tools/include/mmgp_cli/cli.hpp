#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace mmgp::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_data = 3;
inline constexpr int exit_failure = 1;

// Entry point shared by the executable and the tests. `args` excludes the program name.
int run(std::span<std::string const> args, std::ostream& out, std::ostream& err);

} // namespace mmgp::cli
