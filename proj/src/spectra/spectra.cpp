#include "qrst/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "qrst/error.hpp"

namespace qrst {

std::string_view stability_name(Stability s) {
  switch (s) {
    case Stability::PositivelyStable: return "positively-stable";
    case Stability::NegativelyStable: return "negatively-stable";
    case Stability::Unstable: return "unstable";
    case Stability::Undetermined: return "undetermined";
  }
  return "undetermined";
}

double residual(const SymTensor& a, double lambda, const Vector& x) {
  return (contract_to_vector(a, x) - lambda * x).norm();
}

Eigenpair canonicalize(Eigenpair pair, std::size_t order) {
  for (Eigen::Index j = 0; j < pair.x.size(); ++j) {
    if (std::abs(pair.x[j]) > 1e-10) {
      if (pair.x[j] < 0.0) {
        pair.x = -pair.x;
        if (order % 2 == 1) pair.lambda = -pair.lambda;
      }
      break;
    }
  }
  return pair;
}

Stability classify_stability(const SymTensor& a, const Eigenpair& pair, const SpectraTolerances& tol) {
  const double scale = std::max(1.0, frobenius_norm(a.dense()));
  if (a.dim() < 2) return Stability::Undetermined;
  const Eigenpair c = canonicalize(pair, a.order());
  if (!(residual(a, c.lambda, c.x) <= tol.residual_gate * scale)) return Stability::Undetermined;

  const auto n = static_cast<Eigen::Index>(a.dim());
  const Matrix u = orthonormal_complement(c.x);
  const Matrix h = static_cast<double>(a.order() - 1) * contract_to_matrix(a, c.x) - c.lambda * Matrix::Identity(n, n);
  const Matrix projected = u.transpose() * h * u;
  const Vector ev = symmetric_matrix_eigen(0.5 * (projected + projected.transpose())).values;

  const double theta = tol.stability_theta * scale;
  if ((ev.array().abs() <= theta).any()) return Stability::Undetermined;
  if ((ev.array() < 0.0).all()) return Stability::NegativelyStable;
  if ((ev.array() > 0.0).all()) return Stability::PositivelyStable;
  return Stability::Unstable;
}

bool equivalent(const Eigenpair& a, const Eigenpair& b, std::size_t order, const SpectraTolerances& tol) {
  const Eigenpair ca = canonicalize(a, order);
  const Eigenpair cb = canonicalize(b, order);
  if (ca.x.size() != cb.x.size()) return false;
  const double lambda_tol = tol.dedup_lambda * std::max(1.0, std::abs(ca.lambda));
  if (std::abs(ca.lambda - cb.lambda) <= lambda_tol && (ca.x - cb.x).norm() <= tol.dedup_vector) return true;
  // A leading component near the 1e-10 cut can canonicalize the two members of
  // one sign pair differently, so also compare against the partner.
  const double partner_lambda = order % 2 == 1 ? -cb.lambda : cb.lambda;
  return std::abs(ca.lambda - partner_lambda) <= lambda_tol && (ca.x + cb.x).norm() <= tol.dedup_vector;
}

namespace {

void sort_set(EigenSet& set) {
  std::vector<std::size_t> order(set.pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    const Eigenpair& a = set.pairs[l];
    const Eigenpair& b = set.pairs[r];
    if (a.lambda != b.lambda) return a.lambda > b.lambda;
    return std::lexicographical_compare(a.x.data(), a.x.data() + a.x.size(), b.x.data(), b.x.data() + b.x.size(),
                                        std::greater<>());
  });
  EigenSet sorted;
  for (std::size_t k : order) {
    sorted.pairs.push_back(std::move(set.pairs[k]));
    sorted.occurrences.push_back(set.occurrences[k]);
    sorted.member_iterations.push_back(std::move(set.member_iterations[k]));
  }
  set = std::move(sorted);
}

void absorb(EigenSet& set, const Eigenpair& canonical, std::size_t count, std::span<const std::size_t> iterations,
            std::size_t order, const SpectraTolerances& tol) {
  for (std::size_t k = 0; k < set.pairs.size(); ++k) {
    if (!equivalent(set.pairs[k], canonical, order, tol)) continue;
    if (canonical.residual < set.pairs[k].residual) set.pairs[k] = canonical;
    set.occurrences[k] += count;
    set.member_iterations[k].insert(set.member_iterations[k].end(), iterations.begin(), iterations.end());
    return;
  }
  set.pairs.push_back(canonical);
  set.occurrences.push_back(count);
  set.member_iterations.emplace_back(iterations.begin(), iterations.end());
}

}  // namespace

EigenSet dedup(std::span<const Eigenpair> pairs, std::size_t order, const SpectraTolerances& tol) {
  EigenSet set;
  for (const Eigenpair& p : pairs) {
    const std::size_t it = p.provenance.iterations;
    absorb(set, canonicalize(p, order), 1, std::span<const std::size_t>(&it, 1), order, tol);
  }
  sort_set(set);
  return set;
}

EigenSet merge(const EigenSet& a, const EigenSet& b, std::size_t order, const SpectraTolerances& tol) {
  EigenSet set = a;
  for (std::size_t k = 0; k < b.pairs.size(); ++k) {
    absorb(set, canonicalize(b.pairs[k], order), b.occurrences[k], b.member_iterations[k], order, tol);
  }
  sort_set(set);
  return set;
}

SymmetricEigen symmetric_matrix_eigen(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("symmetric_matrix_eigen needs a square matrix");
  const double norm = m.norm();
  if ((m - m.transpose()).norm() > 1e-8 * norm) throw InputError("matrix is not symmetric");
  if (!m.allFinite()) throw InputError("matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()));
  if (solver.info() != Eigen::Success) throw InputError("symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double lambda_min(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  return symmetric_matrix_eigen(m).values[0];
}

Matrix orthonormal_complement(const Vector& x) {
  const Eigen::Index n = x.size();
  if (n < 2) return Matrix(n, 0);
  const Matrix column = x;
  Eigen::HouseholderQR<Matrix> qr(column);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - 1);
}

Eigenpair make_eigenpair(const SymTensor& a, double lambda, Vector x, Provenance provenance,
                         const SpectraTolerances& tol) {
  Eigenpair p;
  p.lambda = lambda;
  p.x = std::move(x);
  p.residual = residual(a, p.lambda, p.x);
  p.provenance = std::move(provenance);
  p.stability = classify_stability(a, p, tol);
  return p;
}

}  // namespace qrst
