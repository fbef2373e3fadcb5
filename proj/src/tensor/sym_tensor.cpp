#include "qrst/sym_tensor.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "qrst/error.hpp"
#include "qrst/kernels.hpp"
#include "symmetry_map.hpp"

namespace qrst {

namespace {

void require_shape(std::size_t order, std::size_t dim) {
  if (order < 1) throw InputError("symmetric tensor order must be at least 1");
  if (dim < 1) throw InputError("symmetric tensor dimension must be at least 1");
}

// Contracts the last mode of a cubical array with x.
std::vector<double> contract_last(std::span<const double> values, const Vector& x) {
  const auto n = static_cast<std::size_t>(x.size());
  const std::size_t inner = values.size() / n;
  std::vector<double> out(inner, 0.0);
  if (inner == 1) {
    out[0] = kernels::dot(values, std::span<const double>(x.data(), n));
    return out;
  }
  for (std::size_t b = 0; b < n; ++b) {
    kernels::axpy(x[static_cast<Eigen::Index>(b)], values.subspan(b * inner, inner), out);
  }
  return out;
}

std::vector<double> contract_values(const SymTensor& t, const Vector& x, std::size_t m) {
  if (static_cast<std::size_t>(x.size()) != t.dim()) {
    throw InputError("contraction vector has length " + std::to_string(x.size()) + ", tensor dimension is " +
                     std::to_string(t.dim()));
  }
  std::vector<double> current(t.values().begin(), t.values().end());
  for (std::size_t step = 0; step < m; ++step) current = contract_last(current, x);
  return current;
}

}  // namespace

std::size_t unique_entry_count(std::size_t order, std::size_t dim) {
  // C(dim + order - 1, order), built incrementally so each step stays integral.
  std::size_t count = 1;
  for (std::size_t k = 1; k <= order; ++k) count = count * (dim - 1 + k) / k;
  return count;
}

std::vector<CanonicalIndex> canonical_indices(std::size_t order, std::size_t dim) {
  require_shape(order, dim);
  const auto map = detail::symmetry_map(order, dim);
  std::vector<CanonicalIndex> out(map->slots());
  for (std::size_t s = 0; s < map->slots(); ++s) {
    out[s].indices.resize(order);
    detail::decode_offset(map->canonical_offset[s], dim, out[s].indices);
    out[s].multiplicity = map->multiplicity[s];
  }
  return out;
}

SymTensor::SymTensor(DenseTensor dense, std::shared_ptr<const detail::SymmetryMap> map)
    : order_(map->order), dim_(map->dim), dense_(std::move(dense)), map_(std::move(map)) {}

SymTensor SymTensor::zeros(std::size_t order, std::size_t dim) {
  require_shape(order, dim);
  return SymTensor(DenseTensor(std::vector<std::size_t>(order, dim)), detail::symmetry_map(order, dim));
}

SymTensor SymTensor::from_unique_entries(std::size_t order, std::size_t dim, std::span<const double> entries) {
  require_shape(order, dim);
  auto map = detail::symmetry_map(order, dim);
  if (entries.size() != map->slots()) {
    throw InputError("expected " + std::to_string(map->slots()) + " unique entries for order " +
                     std::to_string(order) + ", dimension " + std::to_string(dim) + "; got " +
                     std::to_string(entries.size()));
  }
  DenseTensor dense(std::vector<std::size_t>(order, dim));
  auto values = dense.values();
  for (std::size_t off = 0; off < values.size(); ++off) values[off] = entries[map->slot_of_offset[off]];
  return SymTensor(std::move(dense), std::move(map));
}

std::vector<double> SymTensor::unique_entries() const {
  std::vector<double> out(map_->slots());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = dense_.values()[map_->canonical_offset[s]];
  return out;
}

SymTensor symmetrize(const DenseTensor& t) {
  if (t.order() < 1) throw InputError("cannot symmetrize an order-0 tensor");
  if (!t.is_cubical()) throw InputError("symmetrize: all tensor dimensions must be equal");
  auto map = detail::symmetry_map(t.order(), t.dim(0));

  std::vector<double> sums(map->slots(), 0.0);
  const auto src = t.values();
  for (std::size_t off = 0; off < src.size(); ++off) sums[map->slot_of_offset[off]] += src[off];
  for (std::size_t s = 0; s < sums.size(); ++s) sums[s] /= static_cast<double>(map->multiplicity[s]);

  DenseTensor dense(t.dims());
  auto dst = dense.values();
  for (std::size_t off = 0; off < dst.size(); ++off) dst[off] = sums[map->slot_of_offset[off]];
  return SymTensor(std::move(dense), std::move(map));
}

DenseTensor contract(const SymTensor& t, const Vector& x, std::size_t m) {
  if (m < 1 || m > t.order()) {
    throw InputError("contraction count " + std::to_string(m) + " outside 1.." + std::to_string(t.order()));
  }
  std::vector<double> values = contract_values(t, x, m);
  return DenseTensor(std::vector<std::size_t>(t.order() - m, t.dim()), std::move(values));
}

Matrix contract_to_matrix(const SymTensor& t, const Vector& x) {
  if (t.order() < 2) throw InputError("A x^{d-2} needs order >= 2");
  const std::vector<double> values = contract_values(t, x, t.order() - 2);
  const auto n = static_cast<Eigen::Index>(t.dim());
  return Eigen::Map<const Matrix>(values.data(), n, n);
}

Vector contract_to_vector(const SymTensor& t, const Vector& x) {
  const std::vector<double> values = contract_values(t, x, t.order() - 1);
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

double contract_to_scalar(const SymTensor& t, const Vector& x) { return contract_values(t, x, t.order()).front(); }

Matrix slice(const SymTensor& t, std::size_t i) {
  if (t.order() < 2) throw InputError("slices need order >= 2");
  if (i >= t.dim()) throw InputError("slice index " + std::to_string(i + 1) + " outside 1.." + std::to_string(t.dim()));
  const std::size_t n = t.dim();
  // offset of (a, b, i, ..., i) = a + n*b + i*(n^2 + ... + n^{d-1})
  std::size_t base = 0;
  std::size_t stride = n * n;
  for (std::size_t k = 2; k < t.order(); ++k, stride *= n) base += i * stride;
  const auto values = t.values();
  const auto nn = static_cast<Eigen::Index>(n);
  Matrix out(nn, nn);
  for (Eigen::Index b = 0; b < nn; ++b) {
    for (Eigen::Index a = 0; a < nn; ++a) out(a, b) = values[base + static_cast<std::size_t>(a + nn * b)];
  }
  return out;
}

SymTensor similarity_transform(const SymTensor& t, const Matrix& q) {
  const auto n = static_cast<Eigen::Index>(t.dim());
  if (q.rows() != n || q.cols() != n) {
    throw InputError("similarity transform needs a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  const Matrix qt = q.transpose();
  DenseTensor current = t.dense();
  for (std::size_t mode = 0; mode < t.order(); ++mode) current = kmode_product(current, qt, mode);
  return symmetrize(current);
}

SymTensor identity_tensor(std::size_t order, std::size_t dim) {
  require_shape(order, dim);
  if (order % 2 != 0) {
    throw UnsupportedError("identity tensor does not exist for odd order " + std::to_string(order));
  }
  DenseTensor pairing(std::vector<std::size_t>(order, dim));
  std::vector<std::size_t> index(order);
  auto values = pairing.values();
  for (std::size_t off = 0; off < values.size(); ++off) {
    detail::decode_offset(off, dim, index);
    bool on = true;
    for (std::size_t k = 0; k < order && on; k += 2) on = index[k] == index[k + 1];
    values[off] = on ? 1.0 : 0.0;
  }
  return symmetrize(pairing);
}

SymTensor labeling_tensor(std::size_t order, std::size_t dim) {
  require_shape(order, dim);
  std::vector<double> entries(unique_entry_count(order, dim));
  for (std::size_t s = 0; s < entries.size(); ++s) entries[s] = static_cast<double>(s + 1);
  return SymTensor::from_unique_entries(order, dim, entries);
}

SymTensor random_symmetric(std::size_t order, std::size_t dim, std::uint64_t seed) {
  require_shape(order, dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> entries(unique_entry_count(order, dim));
  for (double& e : entries) e = normal(rng);
  return SymTensor::from_unique_entries(order, dim, entries);
}

SymTensor add_scaled(const SymTensor& a, double alpha, const SymTensor& b) {
  if (a.order() != b.order() || a.dim() != b.dim()) throw InputError("add_scaled: tensor shapes differ");
  std::vector<double> entries = a.unique_entries();
  const std::vector<double> other = b.unique_entries();
  for (std::size_t s = 0; s < entries.size(); ++s) entries[s] += alpha * other[s];
  return SymTensor::from_unique_entries(a.order(), a.dim(), entries);
}

void validate_permutation(std::span<const std::size_t> perm, std::size_t n) {
  if (perm.size() != n) {
    throw InputError("permutation has " + std::to_string(perm.size()) + " entries, expected " + std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) throw InputError("not a permutation of 1.." + std::to_string(n));
    seen[p] = true;
  }
}

Matrix permutation_matrix(std::span<const std::size_t> perm) {
  validate_permutation(perm, perm.size());
  const auto n = static_cast<Eigen::Index>(perm.size());
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) p(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(j)]), j) = 1.0;
  return p;
}

SymTensor apply_permutation(const SymTensor& t, std::span<const std::size_t> perm) {
  validate_permutation(perm, t.dim());
  const std::size_t n = t.dim();
  DenseTensor out(t.dense().dims());
  const auto src = t.values();
  auto dst = out.values();
  std::vector<std::size_t> index(t.order());
  for (std::size_t off = 0; off < dst.size(); ++off) {
    detail::decode_offset(off, n, index);
    std::size_t source = 0;
    for (std::size_t k = index.size(); k-- > 0;) source = source * n + perm[index[k]];
    dst[off] = src[source];
  }
  return SymTensor(std::move(out), t.map_);
}

}  // namespace qrst
