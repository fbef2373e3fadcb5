#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "qrst/dense_tensor.hpp"
#include "qrst/linalg.hpp"

namespace qrst {

/// A nondecreasing index tuple (0-based) naming one unique entry of a
/// symmetric tensor, with the number of positions that share its value.
struct CanonicalIndex {
  std::vector<std::size_t> indices;
  std::size_t multiplicity = 1;
};

/// C(dim + order - 1, order).
std::size_t unique_entry_count(std::size_t order, std::size_t dim);

/// All canonical indices in lexicographic order.
std::vector<CanonicalIndex> canonical_indices(std::size_t order, std::size_t dim);

namespace detail {
struct SymmetryMap;
}

/// Real symmetric tensor of order d and dimension n, stored densely.
///
/// Every permutation of an index tuple reads the same bit pattern; the
/// constructors write one canonical value into all permuted positions.
/// Instances are immutable.
class SymTensor {
 public:
  static SymTensor zeros(std::size_t order, std::size_t dim);

  /// Unique entries in lexicographic canonical-index order; throws InputError
  /// when the count is not C(dim + order - 1, order).
  static SymTensor from_unique_entries(std::size_t order, std::size_t dim,
                                       std::span<const double> entries);

  std::size_t order() const { return order_; }
  std::size_t dim() const { return dim_; }
  const DenseTensor& dense() const { return dense_; }
  std::span<const double> values() const { return dense_.values(); }
  double at(std::span<const std::size_t> index) const { return dense_(index); }
  double at(std::initializer_list<std::size_t> index) const { return dense_(index); }

  /// Inverse of from_unique_entries, bit-exact.
  std::vector<double> unique_entries() const;

  bool operator==(const SymTensor& other) const { return dense_ == other.dense_; }

 private:
  SymTensor(DenseTensor dense, std::shared_ptr<const detail::SymmetryMap> map);

  std::size_t order_ = 0;
  std::size_t dim_ = 0;
  DenseTensor dense_;
  std::shared_ptr<const detail::SymmetryMap> map_;

  friend SymTensor symmetrize(const DenseTensor& t);
  friend SymTensor apply_permutation(const SymTensor& t, std::span<const std::size_t> perm);
};

/// Averages every entry over all its permuted positions.
SymTensor symmetrize(const DenseTensor& t);

/// A x^m: x^T multiplied onto the last m modes, singleton modes squeezed.
/// m == order yields an order-0 tensor. Throws InputError for m outside 1..d.
DenseTensor contract(const SymTensor& t, const Vector& x, std::size_t m);

/// A x^{d-2} as an n x n matrix (the tensor itself when d == 2).
Matrix contract_to_matrix(const SymTensor& t, const Vector& x);
/// A x^{d-1}.
Vector contract_to_vector(const SymTensor& t, const Vector& x);
/// A x^d.
double contract_to_scalar(const SymTensor& t, const Vector& x);

/// The square slice A(:, :, i, ..., i) = A e_i^{d-2}; i is 0-based.
Matrix slice(const SymTensor& t, std::size_t i);

/// A Q^d = A x_1 Q^T x_2 Q^T ... x_d Q^T, re-symmetrized.
SymTensor similarity_transform(const SymTensor& t, const Matrix& q);

/// Even-order tensor with E x^{d-1} = x on the unit sphere.
/// Throws UnsupportedError for odd order.
SymTensor identity_tensor(std::size_t order, std::size_t dim);

/// Unique entries numbered 1, 2, ... in lexicographic canonical order.
SymTensor labeling_tensor(std::size_t order, std::size_t dim);

/// Unique entries drawn from the standard normal distribution.
SymTensor random_symmetric(std::size_t order, std::size_t dim, std::uint64_t seed);

/// a + alpha * b.
SymTensor add_scaled(const SymTensor& a, double alpha, const SymTensor& b);

/// Validates a 0-based permutation of 0..n-1; throws InputError otherwise.
void validate_permutation(std::span<const std::size_t> perm, std::size_t n);

/// Matrix P with P(perm[j], j) = 1.
Matrix permutation_matrix(std::span<const std::size_t> perm);

/// A P^d for the permutation matrix of perm, by index relabeling:
/// result[j_1..j_d] = t[perm[j_1]..perm[j_d]].
SymTensor apply_permutation(const SymTensor& t, std::span<const std::size_t> perm);

}  // namespace qrst
