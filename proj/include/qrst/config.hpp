#pragma once

#include <cstddef>
#include <cstdint>

namespace qrst {

/// Sign convention for the Q/R factors of the shifted slice.
enum class QrSign {
  /// Householder reflections as in LAPACK geqrf: R(j,j) = -sign(pivot)*norm,
  /// no reflection when the column tail is already zero.
  Householder,
  /// Same factorization with signs flipped so that diag(R) >= 0.
  NonNegativeDiagonal,
};

/// Distribution of power-method starting vectors (always normalized).
enum class StartDistribution {
  Sphere,            // normalized standard normal vector
  Uniform,           // componentwise U[0, 1]
  UniformSymmetric,  // componentwise U[-1, 1]
};

struct SpectraTolerances {
  /// Stability is undetermined above residual_gate * max(1, ||A||_F).
  double residual_gate = 1e-6;
  /// Projected-Hessian eigenvalues within theta * max(1, ||A||_F) of zero.
  double stability_theta = 1e-8;
  /// Merge when |dl| <= dedup_lambda * max(1, |l|) and ||dx|| <= dedup_vector.
  double dedup_lambda = 1e-6;
  double dedup_vector = 1e-4;
};

struct SolverConfig {
  double tol = 1e-13;
  std::size_t max_iter = 1000;
  double delta = 1.0;
  /// Fixed power-method shift.
  double alpha = 0.0;
  double adaptive_target = 1e-2;
  /// Power-method stop on |lambda_{k+1} - lambda_k|.
  double lambda_tol = 1e-15;
  std::uint64_t seed = 0;
  std::size_t perm_cap = 720;
  std::size_t restarts = 100;
  std::size_t threads = 1;
  QrSign qr_sign = QrSign::Householder;
  StartDistribution start = StartDistribution::Uniform;
  SpectraTolerances spectra;

  /// Throws InputError naming the first bad field.
  void validate() const;
};

/// Bound every emitted eigenpair must meet: max(1e-8, 10 tol) * max(1, ||A||_F).
double residual_bound(const SolverConfig& cfg, double frobenius);

}  // namespace qrst
