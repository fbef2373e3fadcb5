#include "qrst/dense_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qrst/error.hpp"
#include "qrst/kernels.hpp"
#include "symmetry_map.hpp"

namespace qrst {

std::size_t checked_volume(std::span<const std::size_t> dims) {
  std::size_t volume = 1;
  for (std::size_t n : dims) {
    if (n == 0) throw InputError("tensor dimensions must be positive");
    if (volume > kMaxTensorValues / n) {
      throw InputError("tensor too large: more than " + std::to_string(kMaxTensorValues) + " values");
    }
    volume *= n;
  }
  return volume;
}

DenseTensor::DenseTensor() : values_(1, 0.0) {}

DenseTensor::DenseTensor(std::vector<std::size_t> dims)
    : dims_(std::move(dims)), values_(checked_volume(dims_), 0.0) {}

DenseTensor::DenseTensor(std::vector<std::size_t> dims, std::vector<double> values)
    : dims_(std::move(dims)), values_(std::move(values)) {
  const std::size_t expected = checked_volume(dims_);
  if (values_.size() != expected) {
    throw InputError("tensor value count " + std::to_string(values_.size()) +
                     " does not match dims (expected " + std::to_string(expected) + ")");
  }
}

DenseTensor DenseTensor::scalar(double value) { return DenseTensor({}, {value}); }

bool DenseTensor::is_cubical() const {
  return std::all_of(dims_.begin(), dims_.end(), [&](std::size_t n) { return n == dims_.front(); });
}

std::size_t DenseTensor::offset(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) throw InputError("index arity does not match tensor order");
  std::size_t off = 0;
  for (std::size_t k = dims_.size(); k-- > 0;) {
    if (index[k] >= dims_[k]) throw InputError("tensor index out of range");
    off = off * dims_[k] + index[k];
  }
  return off;
}

DenseTensor kmode_product(const DenseTensor& t, const Matrix& u, std::size_t mode) {
  if (mode >= t.order()) {
    throw InputError("mode " + std::to_string(mode) + " out of range for order-" +
                     std::to_string(t.order()) + " tensor");
  }
  const std::size_t n = t.dim(mode);
  if (static_cast<std::size_t>(u.cols()) != n) {
    throw InputError("k-mode product: matrix has " + std::to_string(u.cols()) +
                     " columns, mode has dimension " + std::to_string(n));
  }
  const auto p = static_cast<std::size_t>(u.rows());

  std::size_t inner = 1;
  for (std::size_t k = 0; k < mode; ++k) inner *= t.dim(k);
  const std::size_t outer = t.size() / (inner * n);

  std::vector<std::size_t> out_dims = t.dims();
  out_dims[mode] = p;
  DenseTensor out(std::move(out_dims));

  const std::span<const double> src = t.values();
  const std::span<double> dst = out.values();
  for (std::size_t r = 0; r < outer; ++r) {
    const auto in_block = src.subspan(r * inner * n, inner * n);
    const auto out_block = dst.subspan(r * inner * p, inner * p);
    if (inner == 1) {
      // out(:, r) += t(b, r) * U(:, b), columns of U are contiguous
      for (std::size_t b = 0; b < n; ++b) {
        kernels::axpy(in_block[b], std::span<const double>(u.col(static_cast<Eigen::Index>(b)).data(), p),
                      out_block);
      }
    } else {
      for (std::size_t a = 0; a < p; ++a) {
        const auto out_row = out_block.subspan(a * inner, inner);
        for (std::size_t b = 0; b < n; ++b) {
          kernels::axpy(u(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)),
                        in_block.subspan(b * inner, inner), out_row);
        }
      }
    }
  }
  return out;
}

double inner_product(const DenseTensor& a, const DenseTensor& b) {
  if (a.dims() != b.dims()) throw InputError("inner product: tensor shapes differ");
  return kernels::dot(a.values(), b.values());
}

double frobenius_norm(const DenseTensor& t) { return std::sqrt(kernels::dot(t.values(), t.values())); }

double max_asymmetry(const DenseTensor& t) {
  if (!t.is_cubical()) throw InputError("asymmetry is only defined for cubical tensors");
  if (t.order() < 2) return 0.0;
  const auto map = detail::symmetry_map(t.order(), t.dim(0));
  const auto values = t.values();
  double worst = 0.0;
  for (std::size_t off = 0; off < values.size(); ++off) {
    const double canonical = values[map->canonical_offset[map->slot_of_offset[off]]];
    worst = std::max(worst, std::fabs(values[off] - canonical));
  }
  return worst;
}

}  // namespace qrst
