#pragma once

// The batch front end. Every subcommand writes one JSON run report to `out`
// and logs to `err`.

#include <iosfwd>
#include <string>
#include <vector>

namespace ssheight::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_domain = 1;
inline constexpr int exit_exhausted = 2;
inline constexpr int exit_usage = 64;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssheight::cli
