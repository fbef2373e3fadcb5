#include "qrst/qrst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "common/parallel.hpp"
#include "qrst/error.hpp"

namespace qrst {

QrFactors householder_qr(const Matrix& m, QrSign sign) {
  if (m.rows() != m.cols()) throw InputError("householder_qr needs a square matrix");
  const Eigen::Index n = m.rows();
  Matrix r = m;
  Matrix q = Matrix::Identity(n, n);
  Vector v(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index len = n - j;
    const double alpha = r(j, j);
    const double tail = len > 1 ? r.col(j).tail(len - 1).norm() : 0.0;
    if (tail == 0.0) continue;  // H = I, as LAPACK's dlarfg does
    const double beta = -std::copysign(std::hypot(alpha, tail), alpha);
    const double tau = (beta - alpha) / beta;
    v.head(len) = r.col(j).tail(len) / (alpha - beta);
    v[0] = 1.0;
    const auto vj = v.head(len);
    // R <- H R on rows j.., Q <- Q H on columns j..
    const Eigen::RowVectorXd w = vj.transpose() * r.bottomRightCorner(len, n - j);
    r.bottomRightCorner(len, n - j).noalias() -= tau * vj * w;
    const Vector z = q.rightCols(len) * vj;
    q.rightCols(len).noalias() -= tau * z * vj.transpose();
    r(j, j) = beta;
    r.col(j).tail(len - 1).setZero();
  }
  if (sign == QrSign::NonNegativeDiagonal) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (r(j, j) < 0.0) {
        r.row(j) *= -1.0;
        q.col(j) *= -1.0;
      }
    }
  }
  return {std::move(q), std::move(r)};
}

double heuristic_shift(const Matrix& slice, double delta) { return -lambda_min(slice) + delta; }

namespace {

double epsilon_of_slice(const Matrix& s, std::size_t i, double spectral_norm) {
  const auto ii = static_cast<Eigen::Index>(i);
  Vector v = s.col(ii);
  v[ii] = 0.0;
  return v.norm() / std::max(std::numeric_limits<double>::epsilon(), spectral_norm);
}

double spectral_norm(const SymmetricEigen& e) {
  return e.values.size() == 0 ? 0.0 : std::max(std::abs(e.values[0]), std::abs(e.values[e.values.size() - 1]));
}

}  // namespace

double convergence_epsilon(const SymTensor& ak, std::size_t i) {
  const Matrix s = slice(ak, i);
  return epsilon_of_slice(s, i, spectral_norm(symmetric_matrix_eigen(s)));
}

std::string_view slice_status_name(SliceStatus s) {
  switch (s) {
    case SliceStatus::Converged: return "converged";
    case SliceStatus::MaxIterations: return "max-iterations";
    case SliceStatus::Diverged: return "diverged";
    case SliceStatus::ResidualRejected: return "residual-rejected";
  }
  return "unknown";
}

SliceOutcome qrst_slice(const SymTensor& a0, std::size_t i, const SolverConfig& cfg, bool shifted,
                        const SliceObserver& observer) {
  cfg.validate();
  if (a0.order() < 2) throw InputError("QRST needs a tensor of order >= 2");
  if (i >= a0.dim()) {
    throw InputError("slice index " + std::to_string(i + 1) + " outside 1.." + std::to_string(a0.dim()));
  }
  const auto n = static_cast<Eigen::Index>(a0.dim());
  const Matrix eye = Matrix::Identity(n, n);

  SliceOutcome out{.state = {.k = 0, .q = eye, .r = eye, .qbar = eye, .qbar_prev = eye, .a_k = a0}};
  SliceIterationState& st = out.state;

  Matrix s = slice(a0, i);
  SymmetricEigen spectrum = symmetric_matrix_eigen(s);
  st.epsilon = epsilon_of_slice(s, i, spectral_norm(spectrum));
  out.trace.push_back({i, 0, 0.0, st.epsilon, spectrum.values[0]});

  while (st.epsilon > cfg.tol && st.k < cfg.max_iter) {
    const double lmin = spectrum.values[0];
    st.shift = shifted ? -lmin + cfg.delta : 0.0;
    QrFactors f = householder_qr(s + st.shift * eye, cfg.qr_sign);
    st.q = std::move(f.q);
    st.r = std::move(f.r);
    st.qbar_prev = st.qbar;
    st.qbar = st.qbar_prev * st.q;
    st.a_k = similarity_transform(st.a_k, st.q);
    ++st.k;

    s = slice(st.a_k, i);
    if (!s.allFinite() || !st.qbar.allFinite()) {
      st.epsilon = std::numeric_limits<double>::quiet_NaN();
      out.trace.push_back({i, st.k, st.shift, st.epsilon, lmin});
      out.status = SliceStatus::Diverged;
      out.message = "non-finite iterate at k=" + std::to_string(st.k);
      return out;
    }
    spectrum = symmetric_matrix_eigen(s);
    st.epsilon = epsilon_of_slice(s, i, spectral_norm(spectrum));
    out.trace.push_back({i, st.k, st.shift, st.epsilon, lmin});
    if (observer) observer(st);
  }

  if (!(st.epsilon <= cfg.tol)) {
    out.status = SliceStatus::MaxIterations;
    out.message = "epsilon " + std::to_string(st.epsilon) + " after " + std::to_string(st.k) + " iterations";
    return out;
  }

  const auto ii = static_cast<Eigen::Index>(i);
  const double lambda = s(ii, ii);
  Provenance prov{.solver = shifted ? "qrst-shifted" : "qrst", .slice = i, .iterations = st.k};
  Eigenpair pair = make_eigenpair(a0, lambda, st.qbar.col(ii), std::move(prov), cfg.spectra);
  const double bound = residual_bound(cfg, frobenius_norm(a0.dense()));
  if (!(pair.residual <= bound)) {
    out.status = SliceStatus::ResidualRejected;
    out.message = "residual " + std::to_string(pair.residual) + " above bound " + std::to_string(bound);
    return out;
  }
  out.status = SliceStatus::Converged;
  out.eigenpair = std::move(pair);
  return out;
}

QrstResult qrst_all(const SymTensor& a0, const SolverConfig& cfg, bool shifted) {
  cfg.validate();
  std::vector<std::optional<SliceOutcome>> slots(a0.dim());
  detail::parallel_for(a0.dim(), cfg.threads, [&](std::size_t i) { slots[i] = qrst_slice(a0, i, cfg, shifted); });

  QrstResult result;
  std::vector<Eigenpair> found;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    SliceOutcome& o = *slots[i];
    if (o.eigenpair) {
      found.push_back(*o.eigenpair);
    } else {
      result.diagnostics.push_back({{}, i, o.status, o.state.epsilon, o.state.k, o.message});
    }
    result.outcomes.push_back(std::move(o));
  }
  result.set = dedup(found, a0.order(), cfg.spectra);
  return result;
}

}  // namespace qrst
