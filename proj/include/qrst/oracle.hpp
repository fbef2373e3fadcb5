#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "qrst/config.hpp"
#include "qrst/spectra.hpp"

namespace qrst {

struct OracleConfig {
  std::size_t n_starts = 5000;
  double refine_tol = 1e-12;
  std::size_t max_refine = 100;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  SpectraTolerances spectra;

  void validate() const;
};

enum class RefineStatus { Converged, Singular, MaxSteps, Diverged };

struct RefineOutcome {
  RefineStatus status = RefineStatus::MaxSteps;
  std::optional<Eigenpair> eigenpair;
  std::size_t steps = 0;
  double residual = 0.0;
};

/// Tangent-space Newton on A x^{d-1} = (A x^d) x over the unit sphere.
RefineOutcome newton_refine(const SymTensor& a, const Vector& x0, const OracleConfig& cfg);

/// Multistart Newton from cfg.n_starts sphere-uniform starts, deduplicated.
EigenSet enumerate_eigenpairs(const SymTensor& a, const OracleConfig& cfg);

}  // namespace qrst
