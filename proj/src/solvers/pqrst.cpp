#include "qrst/pqrst.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <set>

#include "common/parallel.hpp"
#include "qrst/error.hpp"

namespace qrst {

namespace {

// n! saturated at limit + 1.
std::size_t factorial_capped(std::size_t n, std::size_t limit) {
  std::size_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    if (f > limit / k) return limit + 1;
    f *= k;
  }
  return f;
}

}  // namespace

PermutationPlan enumerate_permutations(std::size_t n, std::size_t cap, std::uint64_t seed) {
  if (cap < 1) throw InputError("permutation cap must be at least 1");
  if (n < 1) throw InputError("permutation size must be at least 1");
  PermutationPlan plan;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  if (factorial_capped(n, cap) <= cap) {
    plan.exhaustive = true;
    do {
      plan.perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return plan;
  }

  plan.exhaustive = false;
  std::set<std::vector<std::size_t>> chosen{perm};
  std::mt19937_64 rng(seed);
  while (chosen.size() < cap) {
    // Fisher-Yates with an explicit draw so the stream is fully specified.
    for (std::size_t k = n - 1; k > 0; --k) std::swap(perm[k], perm[rng() % (k + 1)]);
    chosen.insert(perm);
  }
  plan.perms.assign(chosen.begin(), chosen.end());
  return plan;
}

Vector map_back(const Vector& v, std::span<const std::size_t> perm) {
  Vector x(v.size());
  for (std::size_t j = 0; j < perm.size(); ++j) x[static_cast<Eigen::Index>(perm[j])] = v[static_cast<Eigen::Index>(j)];
  return x;
}

PqrstResult pqrst(const SymTensor& a0, const SolverConfig& cfg, bool shifted) {
  cfg.validate();
  return pqrst(a0, cfg, shifted, enumerate_permutations(a0.dim(), cfg.perm_cap, cfg.seed));
}

PqrstResult pqrst(const SymTensor& a0, const SolverConfig& cfg, bool shifted, const PermutationPlan& plan) {
  cfg.validate();
  for (const auto& p : plan.perms) validate_permutation(p, a0.dim());

  const std::size_t n = a0.dim();
  const std::size_t jobs = plan.perms.size() * n;
  std::vector<std::optional<SliceOutcome>> slots(jobs);
  std::vector<std::optional<SymTensor>> permuted(plan.perms.size());
  for (std::size_t p = 0; p < plan.perms.size(); ++p) permuted[p] = apply_permutation(a0, plan.perms[p]);

  detail::parallel_for(jobs, cfg.threads, [&](std::size_t job) {
    slots[job] = qrst_slice(*permuted[job / n], job % n, cfg, shifted);
  });

  const double bound = residual_bound(cfg, frobenius_norm(a0.dense()));
  PqrstResult result;
  std::vector<Eigenpair> found;
  for (std::size_t p = 0; p < plan.perms.size(); ++p) {
    const auto& perm = plan.perms[p];
    PermutationRun run{perm, {}};
    for (std::size_t i = 0; i < n; ++i) {
      SliceOutcome o = std::move(*slots[p * n + i]);
      ++result.slice_runs;
      if (o.eigenpair) {
        Provenance prov = o.eigenpair->provenance;
        prov.solver = shifted ? "pqrst-shifted" : "pqrst";
        prov.permutation = perm;
        Eigenpair mapped = make_eigenpair(a0, o.eigenpair->lambda, map_back(o.eigenpair->x, perm), std::move(prov),
                                          cfg.spectra);
        if (mapped.residual <= bound) {
          o.eigenpair = mapped;
          found.push_back(std::move(mapped));
          ++result.converged_runs;
        } else {
          o.status = SliceStatus::ResidualRejected;
          o.message = "mapped residual " + std::to_string(mapped.residual) + " above bound";
          o.eigenpair.reset();
        }
      }
      if (!o.eigenpair) result.diagnostics.push_back({perm, i, o.status, o.state.epsilon, o.state.k, o.message});
      run.outcomes.push_back(std::move(o));
    }
    result.runs.push_back(std::move(run));
  }
  result.set = dedup(found, a0.order(), cfg.spectra);
  return result;
}

}  // namespace qrst
