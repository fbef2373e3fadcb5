#include <cmath>
#include <random>

#include "doctest.h"
#include "qrst/error.hpp"
#include "qrst/qrst.hpp"
#include "support/oracles.hpp"

using namespace qrst;

namespace {

SymTensor matrix_tensor(const Matrix& m) {
  std::vector<double> e;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j) e.push_back(m(i, j));
  return SymTensor::from_unique_entries(2, static_cast<std::size_t>(m.rows()), e);
}

SolverConfig long_run() {
  SolverConfig cfg;
  cfg.max_iter = 5000;
  return cfg;
}

}  // namespace

TEST_SUITE("qrst") {
  TEST_CASE("Householder QR factors with LAPACK signs") {
    std::mt19937_64 rng(1);
    for (std::size_t n = 1; n <= 6; ++n) {
      const Matrix m = testing::random_matrix(n, n, rng);
      for (QrSign sign : {QrSign::Householder, QrSign::NonNegativeDiagonal}) {
        const QrFactors f = householder_qr(m, sign);
        const auto nn = static_cast<Eigen::Index>(n);
        CHECK((f.q * f.r - m).norm() <= 1e-13 * m.norm());
        CHECK((f.q.transpose() * f.q - Matrix::Identity(nn, nn)).norm() <= 1e-13);
        for (Eigen::Index i = 0; i < nn; ++i)
          for (Eigen::Index j = 0; j < i; ++j) CHECK(f.r(i, j) == 0.0);
        if (sign == QrSign::NonNegativeDiagonal) {
          for (Eigen::Index j = 0; j < nn; ++j) CHECK(f.r(j, j) >= 0.0);
        } else {
          // The first reflection sends the pivot to the opposite sign.
          if (nn > 1) CHECK(f.r(0, 0) * m(0, 0) < 0.0);
        }
      }
    }
    Matrix diag = Vector{{2.0, -3.0}}.asDiagonal();
    const QrFactors f = householder_qr(diag);
    CHECK(f.q == Matrix::Identity(2, 2));
    CHECK(f.r == diag);
    CHECK_THROWS_AS(householder_qr(Matrix::Zero(2, 3)), InputError);
  }

  TEST_CASE("heuristic shift") {
    CHECK(heuristic_shift(Matrix::Identity(3, 3), 1.0) == doctest::Approx(0.0));
    CHECK(heuristic_shift(Vector{{-3.0, 2.0}}.asDiagonal(), 1.0) == doctest::Approx(4.0));
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 20; ++rep) {
      const Matrix s = testing::random_symmetric_matrix(4, rng);
      const double shift = heuristic_shift(s, 1.0);
      const auto ev = testing::jacobi_eigenvalues(s + shift * Matrix::Identity(4, 4));
      CHECK(std::abs(ev[0] - 1.0) <= 1e-10 * std::max(1.0, s.norm()));
    }
  }

  TEST_CASE("convergence epsilon") {
    CHECK(convergence_epsilon(identity_tensor(4, 3), 1) == 0.0);
    CHECK(convergence_epsilon(matrix_tensor(Vector{{1.0, -4.0, 2.0}}.asDiagonal()), 2) == 0.0);
    // Labeling tensor, first slice [[1,2,3],[2,4,5],[3,5,6]], first column (1,2,3).
    Matrix s(3, 3);
    s << 1, 2, 3, 2, 4, 5, 3, 5, 6;
    const auto ev = testing::jacobi_eigenvalues(s);
    const double spectral = std::max(std::abs(ev.front()), std::abs(ev.back()));
    CHECK(convergence_epsilon(labeling_tensor(3, 3), 0) == doctest::Approx(std::sqrt(13.0) / spectral).epsilon(1e-14));
  }

  TEST_CASE("shifted slice run on the labeling tensor reaches the unstable pair") {
    const SliceOutcome o = qrst_slice(labeling_tensor(3, 3), 0, long_run(), true);
    REQUIRE(o.converged());
    REQUIRE(o.eigenpair);
    const Eigenpair& p = *o.eigenpair;
    CHECK(std::abs(p.lambda - (-0.1401)) <= 1e-3);
    const Vector expect{{-0.7854, 0.6029, -0.1401}};
    CHECK(std::min((p.x - expect).cwiseAbs().maxCoeff(), (p.x + expect).cwiseAbs().maxCoeff()) <= 1e-2);
    CHECK(o.state.k >= 30);
    CHECK(o.state.k <= 1000);
    CHECK(p.stability == Stability::Unstable);
    CHECK(o.trace.size() == o.state.k + 1);
    CHECK(o.trace.front().k == 0);
    CHECK(o.trace.back().epsilon <= 1e-13);
  }

  TEST_CASE("matrix case recovers matrix eigenvalues") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 10; ++rep) {
      const std::size_t n = 2 + rep % 4;
      const Matrix m = testing::random_symmetric_matrix(n, rng);
      const auto ev = testing::jacobi_eigenvalues(m);
      for (std::size_t i = 0; i < n; ++i) {
        const SliceOutcome o = qrst_slice(matrix_tensor(m), i, long_run(), true);
        REQUIRE(o.eigenpair);
        double best = 1e300;
        for (double v : ev) best = std::min(best, std::abs(v - o.eigenpair->lambda));
        CHECK(best <= 1e-8);
      }
    }
  }

  TEST_CASE("identity tensor converges immediately to 1") {
    for (std::size_t i = 0; i < 3; ++i) {
      const SliceOutcome o = qrst_slice(identity_tensor(4, 3), i, SolverConfig{}, true);
      REQUIRE(o.eigenpair);
      CHECK(std::abs(o.eigenpair->lambda - 1.0) <= 1e-10);
      CHECK(o.state.k == 0);
    }
  }

  TEST_CASE("iteration invariants hold at every step") {
    std::mt19937_64 rng(4);
    int cases = 0;
    for (std::size_t d = 2; d <= 4; ++d) {
      for (std::size_t n = 2; n <= 4; ++n) {
        const SymTensor a0 = random_symmetric(d, n, rng());
        const double fa = frobenius_norm(a0.dense());
        SolverConfig cfg;
        cfg.max_iter = 40;
        for (std::size_t i = 0; i < n; ++i) {
          for (bool shifted : {true, false}) {
            qrst_slice(a0, i, cfg, shifted, [&](const SliceIterationState& st) {
              ++cases;
              const auto nn = static_cast<Eigen::Index>(n);
              CHECK((st.qbar.transpose() * st.qbar - Matrix::Identity(nn, nn)).norm() <= 1e-10);
              CHECK(max_asymmetry(st.a_k.dense()) == 0.0);
              const SymTensor direct = similarity_transform(a0, st.qbar);
              CHECK(testing::max_abs_diff(direct.values(), st.a_k.values()) <= 1e-8 * fa);
              // Orthogonal-iteration form of the slice update.
              const Vector q_prev = st.qbar_prev.col(static_cast<Eigen::Index>(i));
              const Matrix m = contract_to_matrix(a0, q_prev);
              const Matrix lhs = st.qbar * st.r;
              const Matrix rhs = m * st.qbar_prev + st.shift * st.qbar_prev;
              CHECK((lhs - rhs).norm() <= 1e-8 * fa);
              if (!shifted && i == 0) {
                CHECK((st.qbar.col(0) * st.r(0, 0) - m * q_prev).norm() <= 1e-8 * fa);
              }
            });
          }
        }
      }
    }
    CHECK(cases >= 100);
  }

  TEST_CASE("converged slices are diagonal in row and column i") {
    std::mt19937_64 rng(5);
    int converged = 0;
    for (int rep = 0; rep < 10; ++rep) {
      const SymTensor a0 = random_symmetric(3, 3, rng());
      const double fa = frobenius_norm(a0.dense());
      for (std::size_t i = 0; i < 3; ++i) {
        const SliceOutcome o = qrst_slice(a0, i, long_run(), true);
        if (!o.converged()) continue;
        ++converged;
        const auto ii = static_cast<Eigen::Index>(i);
        const Matrix& r = o.state.r;
        double off = 0.0;
        for (Eigen::Index j = 0; j < r.rows(); ++j) {
          if (j != ii) off += r(ii, j) * r(ii, j) + r(j, ii) * r(j, ii);
        }
        CHECK(std::sqrt(off) <= 100 * 1e-13 * r.norm() + 1e-12 * fa);
        // R_k factors the slice built from the previous iterate; for odd d the
        // current one differs from it by the sign partner.
        const Vector q = o.state.qbar_prev.col(ii);
        const double sign = o.state.q(ii, ii) >= 0 ? 1.0 : -1.0;
        const double mu = sign * r(ii, ii) - o.state.shift;
        CHECK((contract_to_matrix(a0, q) * q - mu * q).norm() <= 100 * 1e-13 * fa + 1e-12 * fa);
      }
    }
    CHECK(converged > 0);
  }

  TEST_CASE("non-convergence and bad input are reported") {
    SolverConfig cfg;
    cfg.max_iter = 3;
    const SliceOutcome o = qrst_slice(labeling_tensor(3, 3), 1, cfg, true);
    CHECK(o.status == SliceStatus::MaxIterations);
    CHECK_FALSE(o.eigenpair);
    CHECK(o.trace.size() == 4);
    CHECK_THROWS_AS(qrst_slice(labeling_tensor(3, 3), 3, cfg, true), InputError);
    cfg.tol = -1.0;
    CHECK_THROWS_AS(qrst_slice(labeling_tensor(3, 3), 0, cfg, true), InputError);
  }

  TEST_CASE("qrst_all on the labeling tensor returns only published pairs") {
    const QrstResult r = qrst_all(labeling_tensor(3, 3), long_run(), true);
    const double published[] = {30.4557, 0.4961, 0.1688, 0.1401};
    REQUIRE_FALSE(r.set.empty());
    for (const auto& p : r.set.pairs) {
      bool hit = false;
      for (double v : published) hit = hit || std::abs(std::abs(p.lambda) - v) <= 1e-3;
      CHECK(hit);
    }
    CHECK(r.outcomes.size() == 3);
    CHECK(r.diagnostics.size() + r.set.occurrences.size() >= 1);
  }

  TEST_CASE("qrst_all on a matrix finds its spectrum") {
    std::mt19937_64 rng(6);
    const Matrix m = testing::random_symmetric_matrix(4, rng);
    const QrstResult r = qrst_all(matrix_tensor(m), long_run(), true);
    REQUIRE(r.set.size() == 4);
    const auto ev = testing::jacobi_eigenvalues(m);
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(r.set.pairs[3 - k].lambda - ev[k]) <= 1e-8);
  }

  TEST_CASE("zero tensor converges trivially") {
    const QrstResult r = qrst_all(SymTensor::zeros(3, 3), SolverConfig{}, true);
    CHECK(r.diagnostics.empty());
    for (const auto& o : r.outcomes) {
      REQUIRE(o.eigenpair);
      CHECK(o.eigenpair->lambda == 0.0);
      CHECK(o.state.k == 0);
    }
  }

  TEST_CASE("thread count does not change results") {
    SolverConfig one = long_run();
    SolverConfig four = long_run();
    four.threads = 4;
    const SymTensor a = random_symmetric(3, 4, 9);
    const QrstResult r1 = qrst_all(a, one, true);
    const QrstResult r4 = qrst_all(a, four, true);
    REQUIRE(r1.set.size() == r4.set.size());
    for (std::size_t k = 0; k < r1.set.size(); ++k) {
      CHECK(r1.set.pairs[k].lambda == r4.set.pairs[k].lambda);
      CHECK(r1.set.pairs[k].x == r4.set.pairs[k].x);
    }
  }
}
