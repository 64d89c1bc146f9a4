#include "wbk/simd.hpp"

#include <atomic>

#include "wbk/errors.hpp"

namespace wbk::simd {

namespace scalar {

void horner_many(const double* c, std::size_t nc, const double* t, double* out, std::size_t n) {
  if (nc == 0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double acc = c[nc - 1];
    for (std::size_t k = nc - 1; k-- > 0;) acc = acc * t[i] + c[k];
    out[i] = acc;
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace scalar

namespace {

struct Kernels {
  void (*horner_many)(const double*, std::size_t, const double*, double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
};

constexpr Kernels kScalar{scalar::horner_many, scalar::axpy, scalar::dot};
constexpr Kernels kAvx2{avx2::horner_many, avx2::axpy, avx2::dot};

std::atomic<const Kernels*> g_kernels{nullptr};
std::atomic<Isa> g_isa{Isa::Scalar};

const Kernels* pick() {
  const Kernels* k = g_kernels.load(std::memory_order_acquire);
  if (k) return k;
  if (avx2_supported()) {
    g_isa.store(Isa::Avx2);
    g_kernels.store(&kAvx2, std::memory_order_release);
    return &kAvx2;
  }
  g_isa.store(Isa::Scalar);
  g_kernels.store(&kScalar, std::memory_order_release);
  return &kScalar;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() {
  pick();
  return g_isa.load();
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Avx2: return "avx2";
    case Isa::Scalar: return "scalar";
  }
  return "?";
}

void force_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_supported())
    throw DomainError("avx2 not supported on this cpu");
  g_isa.store(isa);
  g_kernels.store(isa == Isa::Avx2 ? &kAvx2 : &kScalar, std::memory_order_release);
}

void horner_many(const double* c, std::size_t nc, const double* t, double* out, std::size_t n) {
  pick()->horner_many(c, nc, t, out, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) { pick()->axpy(a, x, y, n); }

double dot(const double* a, const double* b, std::size_t n) { return pick()->dot(a, b, n); }

}  // namespace wbk::simd
