// AArch64 NEON variants (two doubles per register). NEON is part of the
// AArch64 baseline, so no runtime probe is needed beyond the build target.

#include "qrst/kernels.hpp"

#include <arm_neon.h>

#include <cmath>

namespace qrst::kernels::neon {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  if (i + 2 <= n) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    i += 2;
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc = std::fma(a[i], b[i], acc);
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

double asum(const double* x, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vabsq_f64(vld1q_f64(x + i)));
    acc1 = vaddq_f64(acc1, vabsq_f64(vld1q_f64(x + i + 2)));
  }
  if (i + 2 <= n) {
    acc0 = vaddq_f64(acc0, vabsq_f64(vld1q_f64(x + i)));
    i += 2;
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += std::fabs(x[i]);
  return acc;
}

}  // namespace qrst::kernels::neon
