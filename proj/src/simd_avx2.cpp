// AVX2+FMA variants of the inner kernels.  This translation unit is compiled
// with -mavx2 -mfma; nothing here runs unless the runtime check passed.

#include "wbk/simd.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

#include <cmath>

namespace wbk::simd::avx2 {

void horner_many(const double* c, std::size_t nc, const double* t, double* out, std::size_t n) {
  if (nc == 0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
    return;
  }
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d tv = _mm256_loadu_pd(t + i);
    __m256d acc = _mm256_set1_pd(c[nc - 1]);
    for (std::size_t k = nc - 1; k-- > 0;)
      acc = _mm256_fmadd_pd(acc, tv, _mm256_set1_pd(c[k]));
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = c[nc - 1];
    for (std::size_t k = nc - 1; k-- > 0;) acc = std::fma(acc, t[i], c[k]);
    out[i] = acc;
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double lanes[4];
  _mm256_storeu_pd(lanes, acc);
  double s = (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
  for (; i < n; ++i) s = std::fma(a[i], b[i], s);
  return s;
}

}  // namespace wbk::simd::avx2

#else  // non-x86: AVX2 entry points exist but must never be reached

#include "wbk/errors.hpp"

namespace wbk::simd::avx2 {

void horner_many(const double*, std::size_t, const double*, double*, std::size_t) {
  throw wbk::DomainError("avx2 kernels unavailable");
}
void axpy(double, const double*, double*, std::size_t) {
  throw wbk::DomainError("avx2 kernels unavailable");
}
double dot(const double*, const double*, std::size_t) {
  throw wbk::DomainError("avx2 kernels unavailable");
}

}  // namespace wbk::simd::avx2

#endif
