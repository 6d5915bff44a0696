#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steptunnel::cli {

/// Exit codes: 0 success, 1 configuration error, 2 numeric error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumeric = 2;

/// Runs the command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace steptunnel::cli
