#include "qrst/config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qrst/error.hpp"

namespace qrst {

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InputError(std::string(field) + " must be a positive finite number");
  }
}

}  // namespace

void SolverConfig::validate() const {
  require_positive(tol, "tol");
  require_positive(delta, "delta");
  require_positive(adaptive_target, "adaptive_target");
  require_positive(lambda_tol, "lambda_tol");
  if (!std::isfinite(alpha)) throw InputError("alpha must be finite");
  if (max_iter < 1) throw InputError("max_iter must be at least 1");
  if (perm_cap < 1) throw InputError("perm_cap must be at least 1");
  if (restarts < 1) throw InputError("restarts must be at least 1");
  if (threads < 1) throw InputError("threads must be at least 1");
  require_positive(spectra.residual_gate, "residual_gate");
  require_positive(spectra.stability_theta, "stability_theta");
  require_positive(spectra.dedup_lambda, "dedup_lambda");
  require_positive(spectra.dedup_vector, "dedup_vector");
}

double residual_bound(const SolverConfig& cfg, double frobenius) {
  return std::max(1e-8, 10.0 * cfg.tol) * std::max(1.0, frobenius);
}

}  // namespace qrst
