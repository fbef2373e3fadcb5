#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "doctest.h"
#include "qrst/error.hpp"
#include "qrst/oracle.hpp"
#include "qrst/pqrst.hpp"
#include "qrst/sym_tensor.hpp"
#include "support/oracles.hpp"

using namespace qrst;

namespace {

double rel_diff(const DenseTensor& a, const DenseTensor& b) {
  return testing::max_abs_diff(a.values(), b.values()) / std::max(1.0, testing::max_abs(b.values()));
}

}  // namespace

TEST_SUITE("tensor") {
  TEST_CASE("dense tensor layout has the first index fastest") {
    DenseTensor t({2, 3, 4});
    CHECK(t.size() == 24);
    const std::vector<std::size_t> idx{1, 2, 3};
    CHECK(t.offset(idx) == 1 + 2 * 2 + 3 * 6);
    CHECK_THROWS_AS(DenseTensor({2, 0}), InputError);
    CHECK_THROWS_AS(DenseTensor({2, 2}, std::vector<double>(3)), InputError);
    CHECK(DenseTensor::scalar(4.5).values()[0] == 4.5);
  }

  TEST_CASE("canonical indices enumerate lexicographically with multinomial multiplicities") {
    const auto idx = canonical_indices(3, 3);
    REQUIRE(idx.size() == 10);
    CHECK(unique_entry_count(3, 3) == 10);
    CHECK(idx.front().indices == std::vector<std::size_t>{0, 0, 0});
    CHECK(idx[1].indices == std::vector<std::size_t>{0, 0, 1});
    CHECK(idx[4].indices == std::vector<std::size_t>{0, 1, 2});
    CHECK(idx[4].multiplicity == 6);
    CHECK(idx.back().indices == std::vector<std::size_t>{2, 2, 2});
    for (std::size_t d = 1; d <= 5; ++d) {
      for (std::size_t n = 1; n <= 4; ++n) {
        std::size_t total = 0;
        for (const auto& c : canonical_indices(d, n)) total += c.multiplicity;
        CHECK(total == static_cast<std::size_t>(std::pow(n, d)));
      }
    }
  }

  TEST_CASE("from_unique_entries builds the labeling tensor") {
    std::vector<double> entries(10);
    std::iota(entries.begin(), entries.end(), 1.0);
    const SymTensor a = SymTensor::from_unique_entries(3, 3, entries);
    CHECK(a.at({0, 0, 0}) == 1.0);
    CHECK(a.at({0, 1, 2}) == 5.0);
    CHECK(a.at({2, 1, 0}) == 5.0);
    CHECK(a.at({2, 2, 2}) == 10.0);
    CHECK(a == labeling_tensor(3, 3));
    double sum = 0.0;
    for (double v : a.values()) sum += std::abs(v);
    CHECK(sum == 144.0);
    CHECK(2.0 * sum == 288.0);
  }

  TEST_CASE("order-2 unique entries give the symmetric matrix") {
    const std::vector<double> e{1.5, -2.0, 3.25};
    const SymTensor a = SymTensor::from_unique_entries(2, 2, e);
    CHECK(a.at({0, 0}) == 1.5);
    CHECK(a.at({0, 1}) == -2.0);
    CHECK(a.at({1, 0}) == -2.0);
    CHECK(a.at({1, 1}) == 3.25);
  }

  TEST_CASE("unique-entry count mismatch names the expected count") {
    const std::vector<double> e(9, 1.0);
    try {
      SymTensor::from_unique_entries(3, 3, e);
      FAIL("expected InputError");
    } catch (const InputError& err) {
      CHECK(std::string(err.what()).find("10") != std::string::npos);
    }
  }

  TEST_CASE("unique entries round-trip bit-exactly and symmetry is exact") {
    std::mt19937_64 rng(1);
    for (std::size_t d = 2; d <= 4; ++d) {
      for (std::size_t n = 1; n <= 5; ++n) {
        const SymTensor a = random_symmetric(d, n, rng());
        const auto e = a.unique_entries();
        CHECK(SymTensor::from_unique_entries(d, n, e).unique_entries() == e);
        CHECK(max_asymmetry(a.dense()) == 0.0);
      }
    }
  }

  TEST_CASE("symmetrize averages permuted positions") {
    const SymTensor a = random_symmetric(3, 3, 4);
    CHECK(symmetrize(a.dense()) == a);

    std::mt19937_64 rng(2);
    const Matrix m = testing::random_matrix(4, 4, rng);
    const DenseTensor dm({4, 4}, std::vector<double>(m.data(), m.data() + 16));
    const Matrix expect = 0.5 * (m + m.transpose());
    const SymTensor s = symmetrize(dm);
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j < 4; ++j)
        CHECK(s.at({static_cast<std::size_t>(i), static_cast<std::size_t>(j)}) == doctest::Approx(expect(i, j)));

    DenseTensor single({2, 2, 2});
    const std::vector<std::size_t> pos{0, 0, 1};
    single(pos) = 3.0;
    const SymTensor t = symmetrize(single);
    CHECK(t.at({0, 0, 1}) == doctest::Approx(1.0));
    CHECK(t.at({0, 1, 0}) == doctest::Approx(1.0));
    CHECK(t.at({1, 0, 0}) == doctest::Approx(1.0));
    CHECK(t.at({0, 0, 0}) == 0.0);
    CHECK_THROWS_AS(symmetrize(DenseTensor({2, 3})), InputError);
  }

  TEST_CASE("k-mode product with the identity is a no-op") {
    std::mt19937_64 rng(7);
    const DenseTensor t = testing::random_dense({3, 4, 2}, rng);
    for (std::size_t mode = 0; mode < 3; ++mode) {
      const auto n = static_cast<Eigen::Index>(t.dim(mode));
      CHECK(kmode_product(t, Matrix::Identity(n, n), mode) == t);
    }
  }

  TEST_CASE("matrix mode products reduce to B A C^T") {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 10; ++rep) {
      const Matrix a = testing::random_matrix(3, 3, rng);
      const Matrix b = testing::random_matrix(3, 3, rng);
      const Matrix c = testing::random_matrix(3, 3, rng);
      const DenseTensor ta({3, 3}, std::vector<double>(a.data(), a.data() + 9));
      const DenseTensor got = kmode_product(kmode_product(ta, b, 0), c, 1);
      const Matrix expect = b * a * c.transpose();
      CHECK(testing::max_abs_diff(got.values(), std::span<const double>(expect.data(), 9)) <= 1e-12);
    }
  }

  TEST_CASE("k-mode product matches the summation oracle and rejects bad shapes") {
    std::mt19937_64 rng(9);
    const DenseTensor t = testing::random_dense({3, 2, 4}, rng);
    for (std::size_t mode = 0; mode < 3; ++mode) {
      const Matrix u = testing::random_matrix(5, t.dim(mode), rng);
      CHECK(rel_diff(kmode_product(t, u, mode), testing::naive_kmode(t, u, mode)) <= 1e-13);
    }
    CHECK_THROWS_AS(kmode_product(t, Matrix::Identity(2, 2), 0), InputError);
    CHECK_THROWS_AS(kmode_product(t, Matrix::Identity(3, 3), 3), InputError);
  }

  TEST_CASE("mode-product ordering and composition laws") {
    std::mt19937_64 rng(10);
    int cases = 0;
    for (std::size_t d = 2; d <= 4; ++d) {
      for (std::size_t n = 2; n <= 5; ++n) {
        for (int rep = 0; rep < 10; ++rep, ++cases) {
          const DenseTensor t = testing::random_dense(std::vector<std::size_t>(d, n), rng);
          const std::size_t p = rng() % d;
          const std::size_t q = (p + 1 + rng() % (d - 1)) % d;
          const Matrix b = testing::random_matrix(n, n, rng);
          const Matrix c = testing::random_matrix(n, n, rng);
          CHECK(rel_diff(kmode_product(kmode_product(t, b, p), c, q), kmode_product(kmode_product(t, c, q), b, p)) <=
                1e-12);
          CHECK(rel_diff(kmode_product(kmode_product(t, b, p), c, p), kmode_product(t, c * b, p)) <= 1e-12);
        }
      }
    }
    CHECK(cases >= 100);
  }

  TEST_CASE("contractions match the summation oracle") {
    std::mt19937_64 rng(12);
    for (std::size_t d = 2; d <= 4; ++d) {
      const SymTensor a = random_symmetric(d, 3, rng());
      const Vector x = testing::random_matrix(3, 1, rng);
      for (std::size_t m = 1; m <= d; ++m) {
        const DenseTensor got = contract(a, x, m);
        CHECK(got.order() == d - m);
        const auto expect = testing::naive_contract(a, x, m);
        CHECK(testing::max_abs_diff(got.values(), expect) <= 1e-12 * std::max(1.0, testing::max_abs(expect)));
      }
      CHECK_THROWS_AS(contract(a, x, 0), InputError);
      CHECK_THROWS_AS(contract(a, x, d + 1), InputError);
      CHECK_THROWS_AS(contract(a, Vector::Ones(4), 1), InputError);
    }
  }

  TEST_CASE("contraction of the identity tensor and of the labeling tensor") {
    const SymTensor e = identity_tensor(4, 3);
    std::mt19937_64 rng(13);
    const Vector x = testing::random_unit(3, rng);
    CHECK((contract_to_vector(e, x) - x).norm() <= 1e-12);

    const SymTensor a = labeling_tensor(3, 3);
    const Vector e1 = Vector::Unit(3, 0);
    const DenseTensor col = contract(a, e1, 2);
    CHECK(col.values()[0] == 1.0);
    CHECK(col.values()[1] == 2.0);
    CHECK(col.values()[2] == 3.0);
    CHECK(contract_to_matrix(a, e1) == slice(a, 0));
  }

  TEST_CASE("contractions compose") {
    std::mt19937_64 rng(14);
    for (std::size_t d = 3; d <= 4; ++d) {
      const SymTensor a = random_symmetric(d, 4, rng());
      const Vector x = testing::random_matrix(4, 1, rng);
      const DenseTensor once = contract(a, x, 1);
      const SymTensor once_sym = symmetrize(once);
      CHECK(max_asymmetry(once) <= 1e-14 * testing::max_abs(once.values()));
      for (std::size_t m = 2; m <= d; ++m) {
        const DenseTensor twice = contract(once_sym, x, m - 1);
        CHECK(rel_diff(twice, contract(a, x, m)) <= 1e-12);
      }
    }
  }

  TEST_CASE("slices read A(:, :, i, ..., i)") {
    const SymTensor a = labeling_tensor(4, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      const Matrix s = slice(a, i);
      for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t q = 0; q < 3; ++q)
          CHECK(s(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) == a.at({p, q, i, i}));
    }
    CHECK_THROWS_AS(slice(a, 3), InputError);
  }

  TEST_CASE("similarity transforms") {
    std::mt19937_64 rng(15);
    const SymTensor a = random_symmetric(3, 4, 3);
    // Re-symmetrization averages equal values, which can move the last bit.
    CHECK(rel_diff(similarity_transform(a, Matrix::Identity(4, 4)).dense(), a.dense()) <= 1e-15);
    int cases = 0;
    for (std::size_t d = 2; d <= 4; ++d) {
      for (std::size_t n = 2; n <= 5; ++n) {
        for (int rep = 0; rep < 9; ++rep, ++cases) {
          const SymTensor t = random_symmetric(d, n, rng());
          const Matrix q = testing::random_orthogonal(n, rng);
          const SymTensor b = similarity_transform(t, q);
          const double fa = frobenius_norm(t.dense());
          CHECK(std::abs(frobenius_norm(b.dense()) - fa) <= 1e-10 * fa);
          CHECK(max_asymmetry(b.dense()) == 0.0);
          // Raw transform before re-symmetrization is symmetric to rounding.
          DenseTensor raw = t.dense();
          for (std::size_t mode = 0; mode < d; ++mode) raw = kmode_product(raw, q.transpose(), mode);
          CHECK(max_asymmetry(raw) <= 1e-10 * fa);
          // General nonsingular P and its inverse undo each other.
          const Matrix p = testing::random_matrix(n, n, rng) + 3.0 * Matrix::Identity(
                                                                       static_cast<Eigen::Index>(n),
                                                                       static_cast<Eigen::Index>(n));
          const SymTensor back = similarity_transform(similarity_transform(t, p), p.inverse());
          CHECK(rel_diff(back.dense(), t.dense()) <= 1e-10 * std::max(1.0, fa));
        }
      }
    }
    CHECK(cases >= 100);
    CHECK_THROWS_AS(similarity_transform(a, Matrix::Identity(3, 3)), InputError);
  }

  TEST_CASE("inner product and Frobenius norm") {
    std::mt19937_64 rng(16);
    const DenseTensor a = testing::random_dense({3, 3, 2}, rng);
    const DenseTensor b = testing::random_dense({3, 3, 2}, rng);
    double sq = 0.0;
    for (double v : a.values()) sq += v * v;
    CHECK(inner_product(a, a) == doctest::Approx(sq).epsilon(1e-14));
    CHECK(inner_product(a, b) == inner_product(b, a));
    CHECK(inner_product(a, a) >= 0.0);
    const double f = frobenius_norm(labeling_tensor(3, 3).dense());
    CHECK(f * f == doctest::Approx(930.0).epsilon(1e-14));
    CHECK_THROWS_AS(inner_product(a, testing::random_dense({3, 2, 3}, rng)), InputError);
  }

  TEST_CASE("identity tensor") {
    CHECK(contract_to_matrix(identity_tensor(2, 3), Vector::Zero(3)) == Matrix::Identity(3, 3));
    const Vector x = Vector::Unit(2, 0);
    CHECK((contract_to_vector(identity_tensor(4, 2), x) - x).norm() <= 1e-15);
    std::mt19937_64 rng(17);
    for (std::size_t d : {2u, 4u, 6u}) {
      for (std::size_t n : {2u, 3u, 4u}) {
        const SymTensor e = identity_tensor(d, n);
        for (int rep = 0; rep < 100; ++rep) {
          const Vector u = testing::random_unit(n, rng);
          CHECK((contract_to_vector(e, u) - u).norm() <= 1e-12);
        }
      }
    }
    CHECK_THROWS_AS(identity_tensor(3, 3), UnsupportedError);
  }

  TEST_CASE("adding alpha E shifts every eigenvalue by alpha") {
    const SymTensor a = random_symmetric(4, 3, 18);
    OracleConfig oc;
    oc.n_starts = 40;
    const EigenSet pairs = enumerate_eigenpairs(a, oc);
    REQUIRE_FALSE(pairs.empty());
    const SymTensor shifted = add_scaled(a, 2.5, identity_tensor(4, 3));
    for (const auto& p : pairs.pairs) CHECK(residual(shifted, p.lambda + 2.5, p.x) <= 1e-10);
  }

  TEST_CASE("labeling tensor numbering") {
    const SymTensor m = labeling_tensor(2, 2);
    CHECK(m.at({0, 0}) == 1.0);
    CHECK(m.at({0, 1}) == 2.0);
    CHECK(m.at({1, 1}) == 3.0);
    const auto e = labeling_tensor(3, 3).unique_entries();
    CHECK(e.size() == 10);
    CHECK(e.front() == 1.0);
    CHECK(e.back() == 10.0);
  }

  TEST_CASE("permutations relabel indices exactly") {
    const SymTensor a = random_symmetric(3, 4, 19);
    const std::vector<std::size_t> id{0, 1, 2, 3};
    CHECK(apply_permutation(a, id) == a);
    const std::vector<std::size_t> p{2, 0, 3, 1};
    std::vector<std::size_t> inv(4);
    for (std::size_t j = 0; j < 4; ++j) inv[p[j]] = j;
    CHECK(apply_permutation(apply_permutation(a, p), inv) == a);
    const SymTensor via_matrix = similarity_transform(a, permutation_matrix(p));
    CHECK(testing::max_abs_diff(apply_permutation(a, p).values(), via_matrix.values()) <= 1e-14);
    CHECK_THROWS_AS(apply_permutation(a, std::vector<std::size_t>{0, 0, 1, 2}), InputError);
    CHECK_THROWS_AS(apply_permutation(a, std::vector<std::size_t>{0, 1, 2}), InputError);
  }

  TEST_CASE("permuted labeling tensors share the eigenpairs up to the mapping") {
    const SymTensor a = labeling_tensor(3, 3);
    OracleConfig oc;
    oc.n_starts = 400;
    const EigenSet base = enumerate_eigenpairs(a, oc);
    for (const auto& perm : enumerate_permutations(3, 6, 0).perms) {
      const EigenSet permuted = enumerate_eigenpairs(apply_permutation(a, perm), oc);
      CHECK(permuted.size() == base.size());
      for (const auto& p : permuted.pairs) {
        Eigenpair mapped = p;
        mapped.x = map_back(p.x, perm);
        bool found = false;
        for (const auto& q : base.pairs) found = found || equivalent(mapped, q, 3);
        CHECK(found);
      }
    }
  }
}
