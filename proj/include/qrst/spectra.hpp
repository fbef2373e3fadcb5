#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qrst/config.hpp"
#include "qrst/linalg.hpp"
#include "qrst/sym_tensor.hpp"

namespace qrst {

enum class Stability { PositivelyStable, NegativelyStable, Unstable, Undetermined };

/// "positively-stable", "negatively-stable", "unstable", "undetermined".
std::string_view stability_name(Stability s);

struct Provenance {
  std::string solver;
  /// 0-based slice index, for the QR solvers.
  std::optional<std::size_t> slice;
  /// 0-based permutation applied before solving; empty when not permuted.
  std::vector<std::size_t> permutation;
  std::size_t iterations = 0;
};

struct Eigenpair {
  double lambda = 0.0;
  Vector x;
  double residual = 0.0;
  Stability stability = Stability::Undetermined;
  Provenance provenance;
};

struct EigenSet {
  std::vector<Eigenpair> pairs;
  /// Number of runs merged into each pair.
  std::vector<std::size_t> occurrences;
  /// Iteration counts of the merged runs, per pair.
  std::vector<std::vector<std::size_t>> member_iterations;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

/// ||A x^{d-1} - lambda x||_2
double residual(const SymTensor& a, double lambda, const Vector& x);

/// Sign of the projected Hessian U^T((d-1) A x^{d-2} - lambda I) U on x-perp,
/// evaluated at the canonical representative of the pair.
Stability classify_stability(const SymTensor& a, const Eigenpair& pair, const SpectraTolerances& tol = {});

/// First component with |x_j| > 1e-10 made positive; lambda flips with x for odd order.
Eigenpair canonicalize(Eigenpair pair, std::size_t order);

/// Canonicalizes and merges equivalent pairs. The representative is the member
/// with the smallest residual. Output is sorted by decreasing lambda.
EigenSet dedup(std::span<const Eigenpair> pairs, std::size_t order, const SpectraTolerances& tol = {});

/// Merges b into a.
EigenSet merge(const EigenSet& a, const EigenSet& b, std::size_t order, const SpectraTolerances& tol = {});

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns
};

/// Throws InputError unless ||M - M^T||_F <= 1e-8 ||M||_F.
SymmetricEigen symmetric_matrix_eigen(const Matrix& m);

/// Smallest eigenvalue of a symmetric matrix.
double lambda_min(const Matrix& m);

/// n x (n-1) orthonormal basis of the complement of a unit vector.
Matrix orthonormal_complement(const Vector& x);

/// Fills residual and stability for (lambda, x) on a.
Eigenpair make_eigenpair(const SymTensor& a, double lambda, Vector x, Provenance provenance,
                         const SpectraTolerances& tol = {});

/// Pair equivalence up to the sign pairing and within the dedup tolerances.
bool equivalent(const Eigenpair& a, const Eigenpair& b, std::size_t order, const SpectraTolerances& tol = {});

}  // namespace qrst
