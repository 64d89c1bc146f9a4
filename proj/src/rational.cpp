#include "wbk/rational.hpp"

#include <cmath>

namespace wbk {

Rational Rational::from_double(double x, long long max_den) {
  if (!std::isfinite(x)) throw DomainError("cannot convert non-finite value to rational");
  const bool neg = x < 0;
  double v = neg ? -x : x;

  // continued-fraction convergents p/q of v
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(frac);
    if (fl > 9e17) break;
    const long long a = static_cast<long long>(fl);
    const long long p2 = a * p1 + p0;
    const long long q2 = a * q1 + q0;
    if (q2 > max_den || p2 < 0 || q2 < 0) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double rem = frac - fl;
    if (rem < 1e-15 * (1.0 + fl)) break;
    frac = 1.0 / rem;
  }
  if (q1 == 0) throw DomainError("rational conversion failed");
  Rational r(neg ? -p1 : p1, q1);
  if (std::abs(r.value() - x) > 1e-9 * (1.0 + std::abs(x)))
    throw DomainError("value is not close to a small rational: " + std::to_string(x));
  return r;
}

}  // namespace wbk
