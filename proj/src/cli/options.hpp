#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qrst/config.hpp"

namespace qrst::cli {

/// Non-negative integer that may be written in scientific notation ("1e3").
std::uint64_t parse_count(std::string_view flag, std::string_view text);

StartDistribution parse_start_distribution(std::string_view text);
std::string_view start_distribution_name(StartDistribution d);

}  // namespace qrst::cli
