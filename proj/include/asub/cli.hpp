#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace asub::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (args[0] is the program name). Results go to `out`,
/// diagnostics to `err`; input not given as an argument or file is read from `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace asub::cli
