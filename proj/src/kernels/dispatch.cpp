#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string>

#include "qrst/error.hpp"
#include "qrst/kernels.hpp"

namespace qrst::kernels {

namespace {

constexpr KernelTable kScalar{Backend::Scalar, "scalar", &scalar::dot, &scalar::axpy, &scalar::asum};
#if defined(QRST_HAVE_AVX2)
constexpr KernelTable kAvx2{Backend::Avx2, "avx2", &avx2::dot, &avx2::axpy, &avx2::asum};
#endif
#if defined(QRST_HAVE_NEON)
constexpr KernelTable kNeon{Backend::Neon, "neon", &neon::dot, &neon::axpy, &neon::asum};
#endif

bool cpu_supports(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(QRST_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(QRST_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* lookup(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return &kScalar;
    case Backend::Avx2:
#if defined(QRST_HAVE_AVX2)
      return &kAvx2;
#else
      return nullptr;
#endif
    case Backend::Neon:
#if defined(QRST_HAVE_NEON)
      return &kNeon;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable* select_initial() {
  if (const char* env = std::getenv("QRST_KERNELS"); env != nullptr && *env != '\0') {
    try {
      const Backend requested = parse_backend(env);
      if (backend_available(requested)) return lookup(requested);
    } catch (const InputError&) {
      // unknown name: fall through to auto-detection
    }
  }
  for (Backend b : {Backend::Avx2, Backend::Neon}) {
    if (backend_available(b)) return lookup(b);
  }
  return &kScalar;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{select_initial()};
  return slot;
}

inline const KernelTable& active() { return *active_slot().load(std::memory_order_relaxed); }

}  // namespace

bool backend_available(Backend backend) { return lookup(backend) != nullptr && cpu_supports(backend); }

const KernelTable& table(Backend backend) {
  if (!backend_available(backend)) {
    throw UnsupportedError("kernel backend '" + std::string(backend_name(backend)) +
                           "' is not available on this host");
  }
  return *lookup(backend);
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
    if (backend_available(b)) out.push_back(b);
  }
  return out;
}

Backend active_backend() { return active().backend; }

void set_backend(Backend backend) { active_slot().store(&table(backend), std::memory_order_relaxed); }

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  if (name == "scalar") return Backend::Scalar;
  if (name == "avx2") return Backend::Avx2;
  if (name == "neon") return Backend::Neon;
  throw InputError("unknown kernel backend '" + std::string(name) + "'");
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

double asum(std::span<const double> x) { return active().asum(x.data(), x.size()); }

}  // namespace qrst::kernels
