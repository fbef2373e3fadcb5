#include <cmath>
#include <random>

#include "doctest.h"
#include "qrst/hopm.hpp"
#include "qrst/oracle.hpp"
#include "support/oracles.hpp"

using namespace qrst;

namespace {

SymTensor matrix_tensor(const Matrix& m) {
  std::vector<double> e;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j) e.push_back(m(i, j));
  return SymTensor::from_unique_entries(2, static_cast<std::size_t>(m.rows()), e);
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("Newton from an exact matrix eigenvector") {
    std::mt19937_64 rng(1);
    const Matrix m = testing::random_symmetric_matrix(4, rng);
    const auto eig = symmetric_matrix_eigen(m);
    const RefineOutcome o = newton_refine(matrix_tensor(m), eig.vectors.col(2), OracleConfig{});
    REQUIRE(o.eigenpair);
    CHECK(o.steps <= 3);
    CHECK(o.residual <= 1e-12);
  }

  TEST_CASE("Newton near the dominant labeling pair") {
    const RefineOutcome o = newton_refine(labeling_tensor(3, 3), Vector{{0.37, 0.61, 0.70}}.normalized(), OracleConfig{});
    REQUIRE(o.eigenpair);
    CHECK(std::abs(o.eigenpair->lambda - 30.4557) <= 1e-4);
    CHECK(std::abs(o.eigenpair->lambda - 30.455745717058) <= 1e-6);
  }

  TEST_CASE("identity tensor needs no Newton step") {
    std::mt19937_64 rng(2);
    const RefineOutcome o = newton_refine(identity_tensor(4, 3), testing::random_unit(3, rng), OracleConfig{});
    REQUIRE(o.eigenpair);
    CHECK(o.steps <= 3);
    CHECK(std::abs(o.eigenpair->lambda - 1.0) <= 1e-12);
  }

  TEST_CASE("the published labeling pairs are all found") {
    const EigenSet set = enumerate_eigenpairs(labeling_tensor(3, 3), OracleConfig{});
    for (double v : {30.4557, 0.4961, 0.1688, 0.1401}) {
      bool hit = false;
      for (const auto& p : set.pairs) hit = hit || std::abs(std::abs(p.lambda) - v) <= 1e-3;
      CHECK(hit);
    }
  }

  TEST_CASE("matrix case finds exactly the matrix spectrum") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 5; ++rep) {
      const Matrix m = testing::random_symmetric_matrix(3, rng);
      OracleConfig oc;
      oc.n_starts = 300;
      const EigenSet set = enumerate_eigenpairs(matrix_tensor(m), oc);
      REQUIRE(set.size() == 3);
      const auto ev = testing::jacobi_eigenvalues(m);
      for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(set.pairs[2 - k].lambda - ev[k]) <= 1e-8);
    }
  }

  TEST_CASE("zero tensor") {
    OracleConfig oc;
    oc.n_starts = 30;
    const EigenSet set = enumerate_eigenpairs(SymTensor::zeros(3, 3), oc);
    REQUIRE_FALSE(set.empty());
    for (const auto& p : set.pairs) CHECK(p.lambda == 0.0);
  }

  TEST_CASE("every pair meets the refinement tolerance and no sign partners remain") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const SymTensor a = random_symmetric(3 + seed % 2, 3, seed);
      OracleConfig oc;
      oc.n_starts = 500;
      const EigenSet set = enumerate_eigenpairs(a, oc);
      const double scale = std::max(1.0, frobenius_norm(a.dense()));
      for (std::size_t k = 0; k < set.size(); ++k) {
        CHECK(set.pairs[k].residual <= oc.refine_tol * scale);
        for (std::size_t j = k + 1; j < set.size(); ++j) CHECK_FALSE(equivalent(set.pairs[k], set.pairs[j], a.order()));
      }
    }
  }

  TEST_CASE("more starts never lose a pair") {
    const SymTensor a = random_symmetric(4, 3, 7);
    OracleConfig small;
    small.n_starts = 200;
    OracleConfig large = small;
    large.n_starts = 400;
    const EigenSet s = enumerate_eigenpairs(a, small);
    const EigenSet l = enumerate_eigenpairs(a, large);
    for (const auto& p : s.pairs) {
      bool found = false;
      for (const auto& q : l.pairs) found = found || equivalent(p, q, 4);
      CHECK(found);
    }
  }
}
