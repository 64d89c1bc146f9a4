#pragma once

#include <cstddef>

namespace wbk::simd {

// Data-parallel inner kernels behind the series/quadrature/linear-algebra
// hot loops.  A scalar reference implementation always exists; an AVX2+FMA
// variant is selected at runtime when the CPU supports it.  Both variants
// are exposed directly so tests can check their equivalence.

enum class Isa { Scalar, Avx2 };

bool avx2_supported();

// Currently active instruction set (after dispatch).
Isa active_isa();
const char* isa_name(Isa isa);

// Test/bench hook: force a specific implementation. Throws DomainError if
// the requested ISA is not available on this machine.
void force_isa(Isa isa);

// Dispatched entry points --------------------------------------------------

// out[i] = c[nc-1]; out[i] = out[i]*t[i] + c[k] for k = nc-2 .. 0
// (Horner in t across independent evaluation points).
void horner_many(const double* c, std::size_t nc, const double* t, double* out, std::size_t n);

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

namespace scalar {
void horner_many(const double* c, std::size_t nc, const double* t, double* out, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
}  // namespace scalar

namespace avx2 {
// Only call when avx2_supported() is true.
void horner_many(const double* c, std::size_t nc, const double* t, double* out, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
}  // namespace avx2

}  // namespace wbk::simd
