#pragma once

// Independent reference implementations used only by tests.  Nothing here
// may call into the library paths it checks: gamma goes through libm,
// Bessel J through its own direct series.

#include <cmath>
#include <cstdint>

namespace oracle {

// Classical Bessel function of the first kind, direct series
//   J_nu(z) = sum_k (-1)^k (z/2)^(nu+2k) / (k! Gamma(nu+k+1)),
// gamma via std::lgamma.  Fine for |z| <= 10 at double precision.
inline double bessel_j(double nu, double z) {
  const double half = 0.5 * z;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double lt = (nu + 2.0 * k) * std::log(half) - std::lgamma(k + 1.0) -
                      std::lgamma(nu + k + 1.0);
    const double term = sign * std::exp(lt);
    sum += term;
    if (k > 4 && std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    sign = -sign;
  }
  return sum;
}

// libm gamma with sign handling; reference for reciprocal_gamma.
inline double tgamma_ref(double z) { return std::tgamma(z); }

// Deterministic xorshift generator for reproducible random grids.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  double uniform() {  // in (0, 1)
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return (static_cast<double>(s >> 11) + 0.5) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

}  // namespace oracle
