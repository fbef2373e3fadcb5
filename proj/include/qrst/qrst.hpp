#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qrst/config.hpp"
#include "qrst/linalg.hpp"
#include "qrst/spectra.hpp"
#include "qrst/sym_tensor.hpp"

namespace qrst {

struct QrFactors {
  Matrix q;
  Matrix r;
};

/// Householder QR of a square matrix with the requested sign convention.
QrFactors householder_qr(const Matrix& m, QrSign sign = QrSign::Householder);

/// -lambda_min(slice) + delta.
double heuristic_shift(const Matrix& slice, double delta);

/// Norm of the part of A_k e_i^{d-1} orthogonal to e_i, over the spectral norm
/// of the slice A_k(:, :, i, ..., i). i is 0-based.
double convergence_epsilon(const SymTensor& ak, std::size_t i);

struct QrstTraceRow {
  std::size_t slice = 0;  // 0-based
  std::size_t k = 0;
  /// Shift applied in step k (0 for the initial row).
  double shift = 0.0;
  double epsilon = 0.0;
  /// lambda_min of the unshifted slice factored in step k (of A_0 for k = 0).
  double slice_lambda_min = 0.0;
};

/// State after step k of the slice iteration.
struct SliceIterationState {
  std::size_t k = 0;
  Matrix q;          // Q_k
  Matrix r;          // R_k
  Matrix qbar;       // Q_1 ... Q_k
  Matrix qbar_prev;  // Q_1 ... Q_{k-1}
  double shift = 0.0;
  double epsilon = 0.0;
  SymTensor a_k;
};

enum class SliceStatus { Converged, MaxIterations, Diverged, ResidualRejected };

std::string_view slice_status_name(SliceStatus s);

struct SliceOutcome {
  SliceStatus status = SliceStatus::MaxIterations;
  /// Present iff converged; residual measured on the original tensor.
  std::optional<Eigenpair> eigenpair;
  std::vector<QrstTraceRow> trace;
  SliceIterationState state;
  std::string message;

  bool converged() const { return status == SliceStatus::Converged; }
};

/// Called after every iteration; used by the invariant tests.
using SliceObserver = std::function<void(const SliceIterationState&)>;

/// One run of the shifted (or unshifted) QR iteration on slice i (0-based).
SliceOutcome qrst_slice(const SymTensor& a0, std::size_t i, const SolverConfig& cfg, bool shifted,
                        const SliceObserver& observer = {});

struct SliceDiagnostic {
  std::vector<std::size_t> permutation;  // empty for plain QRST
  std::size_t slice = 0;
  SliceStatus status = SliceStatus::MaxIterations;
  double epsilon = 0.0;
  std::size_t iterations = 0;
  std::string message;
};

struct QrstResult {
  EigenSet set;
  /// Indexed by slice.
  std::vector<SliceOutcome> outcomes;
  /// Every slice that did not yield an eigenpair.
  std::vector<SliceDiagnostic> diagnostics;
};

/// Runs every slice (concurrently when cfg.threads > 1) and dedups.
QrstResult qrst_all(const SymTensor& a0, const SolverConfig& cfg, bool shifted);

}  // namespace qrst
