#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace taxalign::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 2;
inline constexpr int kExitFormat = 3;
inline constexpr int kExitConfig = 4;

/// Entry point for `taxalign <align|transform|eval|stats> [flags]`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace taxalign::cli
