#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qrst/linalg.hpp"

namespace qrst {

/// Largest number of stored values any tensor may hold.
inline constexpr std::size_t kMaxTensorValues = std::size_t{1} << 24;

/// Dense multiway array of doubles.
///
/// Values are stored with the first index varying fastest and the last index
/// slowest, so the flat offset of (i_1, ..., i_d) is
/// i_1 + n_1 * (i_2 + n_2 * (i_3 + ...)), and values() is exactly vec(A).
/// An order-0 tensor holds a single scalar.
class DenseTensor {
 public:
  /// Order-0 tensor holding 0.
  DenseTensor();
  /// Zero-filled tensor; every dim must be positive.
  explicit DenseTensor(std::vector<std::size_t> dims);
  DenseTensor(std::vector<std::size_t> dims, std::vector<double> values);

  static DenseTensor scalar(double value);

  std::size_t order() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim(std::size_t mode) const { return dims_.at(mode); }
  std::size_t size() const { return values_.size(); }
  bool is_cubical() const;

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  std::size_t offset(std::span<const std::size_t> index) const;
  double operator()(std::span<const std::size_t> index) const { return values_[offset(index)]; }
  double& operator()(std::span<const std::size_t> index) { return values_[offset(index)]; }
  double operator()(std::initializer_list<std::size_t> index) const {
    return (*this)(std::span<const std::size_t>(index.begin(), index.size()));
  }

  bool operator==(const DenseTensor&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> values_;
};

/// Product of dims with overflow and size-limit checks.
std::size_t checked_volume(std::span<const std::size_t> dims);

/// (t x_mode U)[.., j, ..] = sum_i U(j, i) t[.., i, ..]. Mode is 0-based.
DenseTensor kmode_product(const DenseTensor& t, const Matrix& u, std::size_t mode);

double inner_product(const DenseTensor& a, const DenseTensor& b);
double frobenius_norm(const DenseTensor& t);

/// Largest |t[idx] - t[sorted(idx)]| over all positions of a cubical tensor.
double max_asymmetry(const DenseTensor& t);

}  // namespace qrst
