#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wbk/rational.hpp"

namespace wbk {

// Generalized power series  sum_k c_k x^(rho + k*delta)  with exact rational
// exponents.  This is the shared representation of Wright's generalized
// Bessel functions and of every function family derived from them by the
// Euler operator Delta = x d/dx, whose action is diagonal on such series.
struct FrobeniusSeries {
  Rational rho;                // leading exponent
  Rational delta{1, 1};        // exponent step, > 0
  std::vector<double> coeffs;  // c_0 .. c_N

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  Rational exponent(int k) const { return rho + Rational(k) * delta; }

  // sum_k c_k x^(rho + k*delta); x = 0 allowed only when rho >= 0.
  double eval(double x) const;

  // Batched evaluation (vectorized Horner across points).
  void eval_many(std::span<const double> xs, std::span<double> out) const;
};

// Series with c_k replaced by c_k * (rho + k*delta)^j, i.e. Delta^j applied
// termwise.  Implemented as j successive single-Delta factors so that
// composing delta_pow(i) and delta_pow(j) is bit-identical to delta_pow(i+j).
FrobeniusSeries delta_pow(const FrobeniusSeries& s, int j);

// (a*Delta + b) applied termwise with exact factor arithmetic: the factor
// a*(rho+k*delta)+b is computed as a rational, so exact zeros stay zeros.
FrobeniusSeries delta_affine(const FrobeniusSeries& s, const Rational& a, const Rational& b);

// Exponents multiplied by p > 0 (variable substitution x -> x^p).
FrobeniusSeries compose_power(const FrobeniusSeries& s, const Rational& p);

// Exponents shifted by r (multiplication by x^r).
FrobeniusSeries shift_exponent(const FrobeniusSeries& s, const Rational& r);

// Coefficient sum of two series on a common exponent grid.
FrobeniusSeries add(const FrobeniusSeries& s, const FrobeniusSeries& t, double ct = 1.0);

// Wright's generalized Bessel function J_{a,b}(x) = sum_j (-x)^j / (j! Gamma(a+b j)),
// entire for b > -1.  Absolute truncation error <= tol; terms hitting a
// Gamma pole contribute exactly zero.  Throws NonConvergent if the terms
// have not started decreasing within the term cap.
double wright_bessel(double a, double b, double x, double tol = 1e-14);

// Truncated Wright series as a FrobeniusSeries in x (rho = 0, delta = 1),
// with enough terms for |tail| < tol at |x| <= x_max even after up to
// dweight applications of Delta.
FrobeniusSeries wright_series(const Rational& a, const Rational& b, double x_max,
                              double tol = 1e-16, int dweight = 0);

// Adaptive builder: keeps calling coef(k) until the term bound
// |c_k| * x_max^exponent * (1+|exponent|)^dweight stays below
// tol * max_term for several consecutive terms.
FrobeniusSeries make_frobenius(const Rational& rho, const Rational& delta, double x_max,
                               const std::function<double(int)>& coef, double tol = 1e-16,
                               int dweight = 0, int max_terms = 400);

// Residual of the order-(m+n) ODE satisfied by J_{a,m/n} at x:
//   prod_{j=0}^{n-1} (Delta/n - j/n) prod_{i=0}^{m-1} (Delta/n - 1 + (a+i)/m) J
//     = (-1)^n x^n/(m^m n^n) J.
// Test oracle for the series machinery; gcd(m,n) = 1 expected.
double validate_wright_ode(double a, int m, int n, double x);

// Same residual on a caller-supplied truncated series (lets tests perturb
// a coefficient and confirm sensitivity).
double wright_ode_residual(const FrobeniusSeries& j_series, double a, int m, int n, double x);

}  // namespace wbk
