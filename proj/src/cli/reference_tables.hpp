#pragma once

// Published eigenpairs of the worked examples (4-decimal lambda, 2-decimal x).

#include <array>
#include <span>
#include <string_view>

#include "qrst/spectra.hpp"

namespace qrst::cli {

struct ReferencePair {
  double lambda;
  std::array<double, 3> x;
  Stability stability;
};

// Labeling tensor, order 3, dimension 3.
inline constexpr std::array<ReferencePair, 4> kLabelingPairs{{
    {30.4557, {0.37, 0.61, 0.70}, Stability::NegativelyStable},
    {0.4961, {-0.80, -0.34, 0.50}, Stability::PositivelyStable},
    {0.1688, {0.86, -0.44, -0.23}, Stability::PositivelyStable},
    {0.1401, {0.78, -0.60, 0.14}, Stability::Unstable},
}};

// Order-4 example whose entries are only given in Kolda & Mayo (2011), Example 3.5.
inline constexpr std::array<ReferencePair, 11> kExample2Pairs{{
    {0.8893, {0.67, 0.25, -0.70}, Stability::NegativelyStable},
    {0.8169, {0.84, -0.26, 0.47}, Stability::NegativelyStable},
    {0.5105, {0.36, -0.78, 0.51}, Stability::Unstable},
    {0.3633, {0.27, 0.64, 0.72}, Stability::NegativelyStable},
    {0.2682, {0.61, 0.44, 0.66}, Stability::Unstable},
    {0.2628, {0.13, -0.44, -0.89}, Stability::Unstable},
    {0.2433, {0.99, 0.09, -0.11}, Stability::Unstable},
    {0.1735, {0.33, 0.91, 0.25}, Stability::Unstable},
    {-0.0451, {0.78, 0.61, 0.12}, Stability::PositivelyStable},
    {-0.5629, {0.18, -0.18, 0.97}, Stability::PositivelyStable},
    {-1.0954, {0.59, -0.75, -0.30}, Stability::PositivelyStable},
}};

// Order-3 example from Kolda & Mayo (2011), Example 3.6.
inline constexpr std::array<ReferencePair, 7> kExample3Pairs{{
    {0.8730, {-0.39, 0.72, 0.57}, Stability::NegativelyStable},
    {0.4306, {-0.72, -0.12, -0.68}, Stability::PositivelyStable},
    {0.2294, {-0.84, 0.44, -0.31}, Stability::Unstable},
    {0.0180, {0.71, 0.51, -0.48}, Stability::NegativelyStable},
    {0.0033, {0.45, 0.77, -0.45}, Stability::Unstable},
    {0.0018, {0.33, 0.63, -0.70}, Stability::Unstable},
    {0.0006, {0.29, 0.73, -0.61}, Stability::PositivelyStable},
}};

inline constexpr double kLambdaTolerance = 5e-4;
inline constexpr double kVectorTolerance = 2e-2;

/// True when pair matches ref within the tolerances, up to the (lambda, x) ~ (+-lambda, -x) pairing.
bool matches_reference(const Eigenpair& pair, const ReferencePair& ref, std::size_t order,
                       double lambda_tol = kLambdaTolerance, double vector_tol = kVectorTolerance);

/// Index of the first reference matched by pair, or -1.
int find_reference(const Eigenpair& pair, std::span<const ReferencePair> refs, std::size_t order,
                   double lambda_tol = kLambdaTolerance, double vector_tol = kVectorTolerance);

}  // namespace qrst::cli
