#pragma once

#include "wbk/rational.hpp"

namespace wbk {

// sin(pi*x) / cos(pi*x) with exact argument reduction; accurate for large x
// where std::sin(M_PI * x) loses digits.
double sinpi(double x);
double cospi(double x);

// 1/Gamma(z).  Entire function: returns exactly 0 at z = 0, -1, -2, ...
// Relative accuracy ~1e-15 on |z| <= 50 (Lanczos sum + reflection).
// Saturates to +/-inf when |1/Gamma| overflows (z very negative).
double reciprocal_gamma(double z);

// Same, but with the pole test done exactly on the rational argument.
double reciprocal_gamma(const Rational& z);

// Gamma(z); +/-inf past the overflow threshold, NaN at poles.
double gamma_fn(double z);

}  // namespace wbk
