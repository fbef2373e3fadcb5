#include "qrst/hopm.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "common/parallel.hpp"
#include "qrst/error.hpp"
#include "qrst/kernels.hpp"

namespace qrst {

double conservative_shift(const SymTensor& a) {
  return static_cast<double>(a.order() - 1) * kernels::asum(a.values());
}

double adaptive_shift(const SymTensor& a, const Vector& x, double target) {
  const double d = static_cast<double>(a.order());
  const double lmin = lambda_min(contract_to_matrix(a, x));
  return std::max(0.0, (target - d * (d - 1.0) * lmin) / d);
}

std::string_view hopm_status_name(HopmStatus s) {
  switch (s) {
    case HopmStatus::Converged: return "converged";
    case HopmStatus::MaxIterations: return "max-iterations";
    case HopmStatus::Diverged: return "diverged";
    case HopmStatus::ResidualRejected: return "residual-rejected";
  }
  return "unknown";
}

namespace {

template <class ShiftRule>
HopmOutcome power_iteration(const SymTensor& a, const Vector& x0, const SolverConfig& cfg, std::size_t run,
                            const char* solver, ShiftRule&& shift_at) {
  cfg.validate();
  if (static_cast<std::size_t>(x0.size()) != a.dim()) throw InputError("start vector length does not match tensor");
  const double norm0 = x0.norm();
  if (!(norm0 > 0.0) || !std::isfinite(norm0)) throw InputError("start vector must be nonzero and finite");

  HopmOutcome out;
  out.x = x0 / norm0;
  out.lambda = contract_to_scalar(a, out.x);
  double alpha = shift_at(out.x);
  out.trace.push_back({run, 0, alpha, out.lambda});

  // Accept only when lambda has settled and the residual meets the bound; a
  // settled lambda with a large residual keeps iterating.
  const double bound = residual_bound(cfg, frobenius_norm(a.dense()));
  bool settled = false;
  bool accepted = false;
  while (out.iterations < cfg.max_iter) {
    Vector y = contract_to_vector(a, out.x) + alpha * out.x;
    const double ny = y.norm();
    if (!(ny > 0.0) || !std::isfinite(ny)) {
      out.status = HopmStatus::Diverged;
      out.message = "degenerate update at k=" + std::to_string(out.iterations);
      return out;
    }
    out.x = y / ny;
    const double next = contract_to_scalar(a, out.x);
    ++out.iterations;
    const double change = std::abs(next - out.lambda);
    out.lambda = next;
    alpha = shift_at(out.x);
    out.trace.push_back({run, out.iterations, alpha, out.lambda});
    // 1e-15 is below one ulp once |lambda| > ~4, where lambda can flip between
    // neighbouring doubles forever; a few ulps of slack lets those runs stop.
    settled = change <= std::max(cfg.lambda_tol, 4 * std::numeric_limits<double>::epsilon() * std::abs(next));
    if (settled && residual(a, out.lambda, out.x) <= bound) {
      accepted = true;
      break;
    }
  }
  if (!accepted && settled) {
    out.status = HopmStatus::ResidualRejected;
    out.message = "lambda settled but residual " + std::to_string(residual(a, out.lambda, out.x)) +
                  " above bound after " + std::to_string(out.iterations) + " iterations";
    return out;
  }
  if (!accepted) {
    out.status = HopmStatus::MaxIterations;
    out.message = "lambda still moving after " + std::to_string(out.iterations) + " iterations";
    return out;
  }

  Eigenpair pair = make_eigenpair(a, out.lambda, out.x, {.solver = solver, .iterations = out.iterations}, cfg.spectra);
  out.status = HopmStatus::Converged;
  out.eigenpair = std::move(pair);
  return out;
}

}  // namespace

HopmOutcome sshopm(const SymTensor& a, const Vector& x0, double alpha, const SolverConfig& cfg, std::size_t run) {
  if (!std::isfinite(alpha)) throw InputError("alpha must be finite");
  return power_iteration(a, x0, cfg, run, alpha == 0.0 ? "shopm" : "sshopm", [alpha](const Vector&) { return alpha; });
}

HopmOutcome sshopm_adaptive(const SymTensor& a, const Vector& x0, const SolverConfig& cfg, std::size_t run) {
  return power_iteration(a, x0, cfg, run, "sshopm-adaptive",
                         [&](const Vector& x) { return adaptive_shift(a, x, cfg.adaptive_target); });
}

Vector random_start(std::size_t n, StartDistribution dist, std::mt19937_64& rng) {
  Vector x(static_cast<Eigen::Index>(n));
  for (;;) {
    switch (dist) {
      case StartDistribution::Sphere: {
        std::normal_distribution<double> g(0.0, 1.0);
        for (auto& v : x) v = g(rng);
        break;
      }
      case StartDistribution::Uniform: {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& v : x) v = u(rng);
        break;
      }
      case StartDistribution::UniformSymmetric: {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& v : x) v = u(rng);
        break;
      }
    }
    const double norm = x.norm();
    if (norm > 0.0) return x / norm;
  }
}

Vector start_vector(std::size_t n, StartDistribution dist, std::uint64_t seed, std::size_t run) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(std::uint64_t{run} >> 32)};
  std::mt19937_64 rng(seq);
  return random_start(n, dist, rng);
}

MultistartResult sshopm_multistart(const SymTensor& a, const SolverConfig& cfg, HopmShift mode) {
  cfg.validate();
  std::vector<std::optional<HopmOutcome>> slots(cfg.restarts);
  detail::parallel_for(cfg.restarts, cfg.threads, [&](std::size_t r) {
    const Vector x0 = start_vector(a.dim(), cfg.start, cfg.seed, r);
    slots[r] = mode == HopmShift::Fixed ? sshopm(a, x0, cfg.alpha, cfg, r) : sshopm_adaptive(a, x0, cfg, r);
  });
  MultistartResult result;
  std::vector<Eigenpair> found;
  for (auto& s : slots) {
    if (s->eigenpair) {
      found.push_back(*s->eigenpair);
      ++result.converged;
    }
    result.runs.push_back(std::move(*s));
  }
  result.set = dedup(found, a.order(), cfg.spectra);
  return result;
}

}  // namespace qrst
