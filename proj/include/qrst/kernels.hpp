#pragma once

// Dense double-precision inner loops used by every multilinear operation.
//
// Each primitive has a scalar reference implementation and, where the target
// supports it, a vectorized variant (AVX2+FMA on x86-64, NEON on AArch64).
// The variant is picked once at startup from the host CPU features and may be
// overridden with the QRST_KERNELS environment variable ("scalar", "avx2",
// "neon") or with set_backend().

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace qrst::kernels {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
  Backend backend;
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*asum)(const double* x, std::size_t n);
};

/// Kernel table for one backend; throws UnsupportedError if the backend was
/// not compiled in or the CPU lacks the instructions.
const KernelTable& table(Backend backend);

/// Backends usable on this host, scalar first.
std::vector<Backend> available_backends();

bool backend_available(Backend backend);

Backend active_backend();

/// Switches the process-wide dispatch. Intended for tests and benchmarks.
void set_backend(Backend backend);

std::string_view backend_name(Backend backend);

/// Parses "scalar" / "avx2" / "neon"; throws InputError otherwise.
Backend parse_backend(std::string_view name);

// Dispatching entry points.

double dot(std::span<const double> a, std::span<const double> b);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// sum_i |x_i|
double asum(std::span<const double> x);

/// RAII override of the active backend, restored on scope exit.
class ScopedBackend {
 public:
  explicit ScopedBackend(Backend backend) : previous_(active_backend()) { set_backend(backend); }
  ~ScopedBackend() { set_backend(previous_); }
  ScopedBackend(const ScopedBackend&) = delete;
  ScopedBackend& operator=(const ScopedBackend&) = delete;

 private:
  Backend previous_;
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double asum(const double* x, std::size_t n);
}  // namespace scalar

#if defined(QRST_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double asum(const double* x, std::size_t n);
}  // namespace avx2
#endif

#if defined(QRST_HAVE_NEON)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double asum(const double* x, std::size_t n);
}  // namespace neon
#endif

}  // namespace qrst::kernels
