#pragma once

#include <iosfwd>

namespace qrst::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitChecksFailed = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNoPairs = 3;
inline constexpr int kExitNeedsInput = 4;

/// Entry point of the qrst command-line tool; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qrst::cli
