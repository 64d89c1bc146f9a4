#include "wbk/frobenius.hpp"

#include <algorithm>
#include <cmath>

#include "wbk/errors.hpp"
#include "wbk/gamma.hpp"
#include "wbk/simd.hpp"

namespace wbk {

double FrobeniusSeries::eval(double x) const {
  if (x < 0.0) throw DomainError("FrobeniusSeries::eval: negative argument");
  if (x == 0.0) {
    if (rho < Rational(0)) throw DomainError("FrobeniusSeries::eval: x=0 with negative leading exponent");
    if (rho.is_zero()) return coeffs.empty() ? 0.0 : coeffs[0];
    return 0.0;
  }
  if (coeffs.empty()) return 0.0;
  const double lx = std::log(x);
  const double t = std::exp(delta.value() * lx);
  double acc = coeffs.back();
  for (int k = static_cast<int>(coeffs.size()) - 1; k-- > 0;) acc = acc * t + coeffs[k];
  return acc * std::exp(rho.value() * lx);
}

void FrobeniusSeries::eval_many(std::span<const double> xs, std::span<double> out) const {
  const std::size_t n = xs.size();
  std::vector<double> t(n), head(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (xs[i] <= 0.0) {  // match the scalar path exactly, edge cases included
      out[i] = eval(xs[i]);
      t[i] = 0.0;
      head[i] = 0.0;
      continue;
    }
    const double lx = std::log(xs[i]);
    t[i] = std::exp(delta.value() * lx);
    head[i] = std::exp(rho.value() * lx);
  }
  simd::horner_many(coeffs.data(), coeffs.size(), t.data(), out.data(), n);
  for (std::size_t i = 0; i < n; ++i)
    if (xs[i] > 0.0) out[i] *= head[i];
    else out[i] = eval(xs[i]);
}

FrobeniusSeries delta_pow(const FrobeniusSeries& s, int j) {
  if (j < 0) throw DomainError("delta_pow: negative power");
  FrobeniusSeries r = s;
  for (int pass = 0; pass < j; ++pass)
    for (std::size_t k = 0; k < r.coeffs.size(); ++k)
      r.coeffs[k] *= r.exponent(static_cast<int>(k)).value();
  return r;
}

FrobeniusSeries delta_affine(const FrobeniusSeries& s, const Rational& a, const Rational& b) {
  FrobeniusSeries r = s;
  for (std::size_t k = 0; k < r.coeffs.size(); ++k) {
    const Rational f = a * r.exponent(static_cast<int>(k)) + b;
    r.coeffs[k] *= f.value();  // exact zero when the rational factor is zero
  }
  return r;
}

FrobeniusSeries compose_power(const FrobeniusSeries& s, const Rational& p) {
  if (!(p > Rational(0))) throw DomainError("compose_power: exponent factor must be positive");
  FrobeniusSeries r = s;
  r.rho = s.rho * p;
  r.delta = s.delta * p;
  return r;
}

FrobeniusSeries shift_exponent(const FrobeniusSeries& s, const Rational& r) {
  FrobeniusSeries out = s;
  out.rho = s.rho + r;
  return out;
}

FrobeniusSeries add(const FrobeniusSeries& s, const FrobeniusSeries& t, double ct) {
  if (!(s.delta == t.delta)) throw DomainError("add: exponent steps differ");
  const Rational diff = (t.rho - s.rho) / s.delta;
  if (!diff.is_integer() || diff.num() < 0)
    throw DomainError("add: series not on a common exponent grid");
  const long long off = diff.num();
  FrobeniusSeries r = s;
  const std::size_t need = static_cast<std::size_t>(off) + t.coeffs.size();
  if (r.coeffs.size() < need) r.coeffs.resize(need, 0.0);
  for (std::size_t k = 0; k < t.coeffs.size(); ++k) r.coeffs[k + off] += ct * t.coeffs[k];
  return r;
}

double wright_bessel(double a, double b, double x, double tol) {
  if (b <= -1.0) throw DomainError("wright_bessel: requires b > -1");
  if (x < 0.0) throw DomainError("wright_bessel: requires x >= 0");
  if (tol <= 0.0) throw DomainError("wright_bessel: tol must be positive");
  constexpr int kMaxTerms = 400;
  double sum = 0.0;
  double xpow = 1.0;       // (-x)^j / j!
  double prev_mag = -1.0;
  bool decreasing = false;
  for (int j = 0; j < kMaxTerms; ++j) {
    const double term = xpow * reciprocal_gamma(a + b * j);
    sum += term;
    const double mag = std::abs(term);
    if (mag > 0.0) {
      if (prev_mag >= 0.0 && mag < prev_mag) decreasing = true;
      if (decreasing && mag < tol * 1e-2) return sum;
      prev_mag = mag;
    }
    if (x == 0.0 && j >= 1) return sum;  // only j=0 contributes
    xpow *= -x / (j + 1);
    if (!std::isfinite(xpow) || !std::isfinite(sum))
      throw NonConvergent("wright_bessel: term overflow before convergence");
  }
  throw NonConvergent("wright_bessel: no decreasing terms within cap");
}

FrobeniusSeries make_frobenius(const Rational& rho, const Rational& delta, double x_max,
                               const std::function<double(int)>& coef, double tol, int dweight,
                               int max_terms) {
  if (!(delta > Rational(0))) throw DomainError("make_frobenius: delta must be positive");
  if (x_max <= 0.0) throw DomainError("make_frobenius: x_max must be positive");
  FrobeniusSeries s;
  s.rho = rho;
  s.delta = delta;
  const double lx = std::log(x_max);
  double max_term = 0.0;
  int quiet = 0;
  for (int k = 0; k < max_terms; ++k) {
    const double c = coef(k);
    s.coeffs.push_back(c);
    const double e = s.exponent(k).value();
    const double bound =
        std::abs(c) * std::exp(e * lx) * std::pow(1.0 + std::abs(e), dweight);
    max_term = std::max(max_term, bound);
    if (k >= 2 && bound <= tol * std::max(1.0, max_term)) {
      if (++quiet >= 4) return s;
    } else {
      quiet = 0;
    }
  }
  throw NonConvergent("make_frobenius: term cap reached before tail shrank");
}

FrobeniusSeries wright_series(const Rational& a, const Rational& b, double x_max, double tol,
                              int dweight) {
  std::vector<double> inv_fact{1.0};
  auto coef = [&, a, b](int k) -> double {
    while (static_cast<int>(inv_fact.size()) <= k)
      inv_fact.push_back(inv_fact.back() / static_cast<double>(inv_fact.size()));
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * inv_fact[k] * reciprocal_gamma(a + Rational(k) * b);
  };
  return make_frobenius(Rational(0), Rational(1), x_max, coef, tol, dweight);
}

double wright_ode_residual(const FrobeniusSeries& j_series, double a, int m, int n, double x) {
  if (x <= 0.0) throw DomainError("wright_ode_residual: requires x > 0");
  // left side: the m+n first-order Euler factors applied termwise
  FrobeniusSeries lhs = j_series;
  auto apply = [&lhs](double shift, int n_) {
    for (std::size_t k = 0; k < lhs.coeffs.size(); ++k) {
      const double e = lhs.exponent(static_cast<int>(k)).value();
      lhs.coeffs[k] *= e / n_ + shift;
    }
  };
  for (int j = 0; j < n; ++j) apply(-static_cast<double>(j) / n, n);
  for (int i = 0; i < m; ++i) apply(-1.0 + (a + i) / m, n);
  // right side: (-1)^n x^n/(m^m n^n) J
  const double scale =
      ((n % 2 == 0) ? 1.0 : -1.0) / (std::pow(m, m) * std::pow(n, n));
  return lhs.eval(x) - scale * std::pow(x, n) * j_series.eval(x);
}

double validate_wright_ode(double a, int m, int n, double x) {
  if (m < 1 || n < 1 || std::gcd(m, n) != 1)
    throw DomainError("validate_wright_ode: m, n must be positive and coprime");
  // build the series tight enough that both sides' truncation tails are
  // far below the residual scale of interest
  std::vector<double> inv_fact{1.0};
  auto coef = [&](int k) -> double {
    while (static_cast<int>(inv_fact.size()) <= k)
      inv_fact.push_back(inv_fact.back() / static_cast<double>(inv_fact.size()));
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * inv_fact[k] * reciprocal_gamma(a + static_cast<double>(m) * k / n);
  };
  const FrobeniusSeries j_series =
      make_frobenius(Rational(0), Rational(1), std::max(1.0, x) * 1.5, coef, 1e-18, m + n);
  return wright_ode_residual(j_series, a, m, n, x);
}

}  // namespace wbk
