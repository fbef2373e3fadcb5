// Reference kernels. Compiled with -ffp-contract=off so every product and
// sum rounds separately; the vector variants are tested against these.

#include "qrst/kernels.hpp"

#include <cmath>

namespace qrst::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double asum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]);
  return acc;
}

}  // namespace qrst::kernels::scalar
