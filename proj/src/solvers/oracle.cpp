#include "qrst/oracle.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "common/parallel.hpp"
#include "qrst/error.hpp"
#include "qrst/hopm.hpp"

namespace qrst {

void OracleConfig::validate() const {
  if (n_starts < 1) throw InputError("n_starts must be at least 1");
  if (!(refine_tol > 0.0)) throw InputError("refine_tol must be positive");
  if (threads < 1) throw InputError("threads must be at least 1");
}

RefineOutcome newton_refine(const SymTensor& a, const Vector& x0, const OracleConfig& cfg) {
  if (static_cast<std::size_t>(x0.size()) != a.dim()) throw InputError("start vector length does not match tensor");
  const double scale = std::max(1.0, frobenius_norm(a.dense()));
  const double target = cfg.refine_tol * scale;
  const auto n = static_cast<Eigen::Index>(a.dim());

  RefineOutcome out;
  Vector x = x0.normalized();
  std::optional<Vector> best;
  double best_residual = 0.0;
  double best_lambda = 0.0;
  std::size_t best_steps = 0;
  int stalled = 0;
  for (;; ++out.steps) {
    const Vector ax = contract_to_vector(a, x);
    const double lambda = x.dot(ax);
    const Vector g = ax - lambda * x;
    out.residual = g.norm();
    if (!std::isfinite(out.residual)) {
      if (best) break;
      out.status = RefineStatus::Diverged;
      return out;
    }
    if (out.residual <= target) {
      // Keep polishing while Newton still improves: at a degenerate pair the
      // rate is only linear and the first accepted iterate can sit far from it.
      if (!best || out.residual < best_residual) {
        stalled = !best || out.residual < 0.9 * best_residual ? 0 : stalled + 1;
        best = x;
        best_residual = out.residual;
        best_lambda = lambda;
        best_steps = out.steps;
      } else {
        ++stalled;
      }
      if (out.residual <= 1e-15 * scale || stalled >= 3) break;
    }
    if (out.steps >= cfg.max_refine) break;
    const Matrix u = orthonormal_complement(x);
    const Matrix j = u.transpose() *
                     (static_cast<double>(a.order() - 1) * contract_to_matrix(a, x) - lambda * Matrix::Identity(n, n)) *
                     u;
    Eigen::JacobiSVD<Matrix> svd(j, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector sv = svd.singularValues();
    if (sv.size() == 0 || !(sv[sv.size() - 1] > 1e-14 * std::max(1.0, sv[0]))) {
      if (best) break;
      out.status = RefineStatus::Singular;
      return out;
    }
    const Vector y = svd.solve(-(u.transpose() * g));
    x = (x + u * y).normalized();
  }
  if (!best) {
    out.status = RefineStatus::MaxSteps;
    return out;
  }
  out.status = RefineStatus::Converged;
  out.steps = best_steps;
  out.residual = best_residual;
  out.eigenpair = make_eigenpair(a, best_lambda, *best, {.solver = "oracle", .iterations = best_steps}, cfg.spectra);
  return out;
}

EigenSet enumerate_eigenpairs(const SymTensor& a, const OracleConfig& cfg) {
  cfg.validate();
  std::vector<std::optional<Eigenpair>> slots(cfg.n_starts);
  detail::parallel_for(cfg.n_starts, cfg.threads, [&](std::size_t r) {
    slots[r] = newton_refine(a, start_vector(a.dim(), StartDistribution::Sphere, cfg.seed, r), cfg).eigenpair;
  });
  std::vector<Eigenpair> found;
  for (auto& s : slots) {
    if (s) found.push_back(std::move(*s));
  }
  return dedup(found, a.order(), cfg.spectra);
}

}  // namespace qrst
