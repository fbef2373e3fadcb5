#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qrst/qrst.hpp"

namespace qrst {

struct PermutationPlan {
  /// 0-based permutations of 0..n-1; the identity is always present.
  std::vector<std::vector<std::size_t>> perms;
  bool exhaustive = true;
};

/// All n! permutations in lexicographic order when n! <= cap, otherwise cap
/// distinct ones (identity included) sampled without replacement from seed.
PermutationPlan enumerate_permutations(std::size_t n, std::size_t cap, std::uint64_t seed);

/// x with x[perm[j]] = v[j]: an eigenvector of A P^d pulled back to A.
Vector map_back(const Vector& v, std::span<const std::size_t> perm);

struct PermutationRun {
  std::vector<std::size_t> permutation;
  /// Slice outcomes on the permuted tensor; eigenpairs already mapped back.
  std::vector<SliceOutcome> outcomes;
};

struct PqrstResult {
  EigenSet set;
  std::vector<PermutationRun> runs;
  std::vector<SliceDiagnostic> diagnostics;
  std::size_t slice_runs = 0;
  std::size_t converged_runs = 0;
};

PqrstResult pqrst(const SymTensor& a0, const SolverConfig& cfg, bool shifted);

/// Runs an explicit plan.
PqrstResult pqrst(const SymTensor& a0, const SolverConfig& cfg, bool shifted, const PermutationPlan& plan);

}  // namespace qrst
