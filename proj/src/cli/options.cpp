#include "options.hpp"

#include <charconv>
#include <cmath>

#include "qrst/error.hpp"

namespace qrst::cli {

std::uint64_t parse_count(std::string_view flag, std::string_view text) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value) || value < 0.0 ||
      std::floor(value) != value || value > 9007199254740992.0) {
    throw InputError(std::string(flag) + " expects a non-negative integer, got '" + std::string(text) + "'");
  }
  return static_cast<std::uint64_t>(value);
}

StartDistribution parse_start_distribution(std::string_view text) {
  if (text == "sphere") return StartDistribution::Sphere;
  if (text == "uniform") return StartDistribution::Uniform;
  if (text == "uniform-symmetric") return StartDistribution::UniformSymmetric;
  throw InputError("--start-dist expects sphere, uniform or uniform-symmetric, got '" + std::string(text) + "'");
}

std::string_view start_distribution_name(StartDistribution d) {
  switch (d) {
    case StartDistribution::Sphere: return "sphere";
    case StartDistribution::Uniform: return "uniform";
    case StartDistribution::UniformSymmetric: return "uniform-symmetric";
  }
  return "uniform";
}

}  // namespace qrst::cli
