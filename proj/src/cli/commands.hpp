#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "qrst/config.hpp"

namespace qrst::cli {

struct ReproduceOptions {
  int example = 1;
  std::optional<std::filesystem::path> input;
  std::optional<std::filesystem::path> trace_dir;
  std::optional<std::filesystem::path> report;
  StartDistribution start = StartDistribution::Uniform;
  std::uint64_t seed = 0;
  std::size_t oracle_starts = 5000;
  std::size_t threads = 1;
};

int reproduce(const ReproduceOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace qrst::cli
