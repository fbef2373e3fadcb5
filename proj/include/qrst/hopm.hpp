#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qrst/config.hpp"
#include "qrst/spectra.hpp"

namespace qrst {

/// (d - 1) * sum of |a| over all n^d positions.
double conservative_shift(const SymTensor& a);

/// max(0, (target - d(d-1) lambda_min(A x^{d-2})) / d).
double adaptive_shift(const SymTensor& a, const Vector& x, double target);

struct HopmTraceRow {
  std::size_t run = 0;
  std::size_t k = 0;
  double alpha = 0.0;
  double lambda = 0.0;
};

enum class HopmStatus { Converged, MaxIterations, Diverged, ResidualRejected };

std::string_view hopm_status_name(HopmStatus s);

struct HopmOutcome {
  HopmStatus status = HopmStatus::MaxIterations;
  std::optional<Eigenpair> eigenpair;
  std::vector<HopmTraceRow> trace;
  /// Last iterate, kept for diagnosis when not converged.
  Vector x;
  double lambda = 0.0;
  std::size_t iterations = 0;
  std::string message;

  bool converged() const { return status == HopmStatus::Converged; }
};

/// x <- (A x^{d-1} + alpha x) / ||.||, stopped on |lambda_{k+1} - lambda_k| <= cfg.lambda_tol.
HopmOutcome sshopm(const SymTensor& a, const Vector& x0, double alpha, const SolverConfig& cfg, std::size_t run = 0);

/// Same update with the shift recomputed from adaptive_shift at every step.
HopmOutcome sshopm_adaptive(const SymTensor& a, const Vector& x0, const SolverConfig& cfg, std::size_t run = 0);

/// Normalized random vector.
Vector random_start(std::size_t n, StartDistribution dist, std::mt19937_64& rng);

/// Start for restart `run`, drawn from its own stream seeded by (seed, run).
Vector start_vector(std::size_t n, StartDistribution dist, std::uint64_t seed, std::size_t run);

enum class HopmShift { Fixed, Adaptive };

struct MultistartResult {
  EigenSet set;
  std::vector<HopmOutcome> runs;
  std::size_t converged = 0;
};

/// cfg.restarts independent runs from start_vector(n, cfg.start, cfg.seed, r).
/// Fixed mode uses cfg.alpha.
MultistartResult sshopm_multistart(const SymTensor& a, const SolverConfig& cfg, HopmShift mode);

}  // namespace qrst
