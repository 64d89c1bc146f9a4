#include "wbk/kernel.hpp"

#include <cmath>
#include <numeric>

#include "wbk/errors.hpp"
#include "wbk/gamma.hpp"
#include "wbk/quadrature.hpp"

namespace wbk {

KernelParams::KernelParams(Rational a, int m_, int n_) : alpha(a), m(m_), n(n_) {
  if (m < 1 || n < 1) throw DomainError("KernelParams: m and n must be positive");
  if (std::gcd(m, n) != 1) throw DomainError("KernelParams: gcd(m, n) must be 1");
  if (!(alpha > Rational(-1))) throw DomainError("KernelParams: alpha must exceed -1");
}

KernelParams KernelParams::make(double alpha, int m, int n) {
  return KernelParams(Rational::from_double(alpha), m, n);
}

void KernelParams::require_integrable() const {
  if (!integrable_valid())
    throw DomainError("alpha must exceed m-1-m/n (got alpha=" + alpha.str() + ", m=" +
                      std::to_string(m) + ", n=" + std::to_string(n) + ")");
}

double KernelParams::scale_to_tilde(double s) const {
  return std::pow(s, m) / (std::pow(m, m) * std::pow(n, n));
}

double KernelParams::scale_from_tilde(double t) const {
  return std::pow(t * std::pow(m, m) * std::pow(n, n), 1.0 / m);
}

std::vector<Rational> nu_vector(const KernelParams& params) {
  const int p = params.p();
  std::vector<Rational> nu(p);
  nu[0] = Rational(0);
  for (int i = 1; i <= params.n - 1; ++i) nu[i] = Rational(i, params.n);
  for (int i = params.n; i <= p - 1; ++i)
    nu[i] = Rational(1) - params.alpha / Rational(params.m) -
            Rational(i - params.n + 1, params.m);
  return nu;
}

ConcomitantCoeffs b_coeffs(const std::vector<Rational>& nu) {
  const int p = static_cast<int>(nu.size());
  ConcomitantCoeffs c;
  c.nu = nu;
  // expand prod_{i=1}^{p-1} (x - nu_i) exactly
  std::vector<Rational> poly{Rational(1)};
  for (int i = 1; i < p; ++i) {
    std::vector<Rational> next(poly.size() + 1, Rational(0));
    for (std::size_t d = 0; d < poly.size(); ++d) {
      next[d + 1] = next[d + 1] + poly[d];
      next[d] = next[d] - nu[i] * poly[d];
    }
    poly = std::move(next);
  }
  c.b_exact = poly;  // degree p-1, leading coefficient 1
  c.b.resize(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) c.b[i] = poly[i].value();
  return c;
}

namespace {

// Alternating Wright-type coefficient arrays for the double series, grown
// until the terms sit at the floating-point floor.
std::vector<double> grow_terms(const std::function<double(int)>& term) {
  constexpr int kCap = 400;
  std::vector<double> t;
  double peak = 0.0;
  int quiet = 0;
  for (int k = 0; k < kCap; ++k) {
    t.push_back(term(k));
    const double mag = std::abs(t.back());
    if (!std::isfinite(mag))
      throw NonConvergent("kernel series: term overflow before convergence");
    peak = std::max(peak, mag);
    if (k >= 1 && mag <= 1e-17 * std::max(1.0, peak)) {
      if (++quiet >= 3) return t;
    } else {
      quiet = 0;
    }
  }
  throw NonConvergent("kernel series: term cap reached before decay");
}

}  // namespace

double kernel_series(const KernelParams& params, double x, double y, double tol) {
  if (!params.series_valid()) throw DomainError("kernel_series: alpha must exceed -1");
  if (y < 0.0) throw DomainError("kernel_series: y must be >= 0");
  if (x < 0.0 || (x == 0.0 && params.alpha < Rational(0)))
    throw DomainError("kernel_series: x must be > 0 (x = 0 needs alpha >= 0)");
  const double alpha = params.alpha.value();
  const double theta = params.theta();
  const Rational nm(params.n, params.m);  // 1/theta

  const double head = std::pow(x, alpha);  // 0 when x = 0, alpha > 0
  if (head == 0.0) return 0.0;

  double xk = 1.0, kfac = 1.0;
  auto a_term = [&](int k) {
    if (k > 0) {
      xk *= -x;
      kfac *= k;
    }
    return xk / kfac * reciprocal_gamma((params.alpha + Rational(1 + k)) * nm);
  };
  double yl = 1.0, lfac = 1.0;
  const double yt = std::pow(y, theta);
  auto b_term = [&](int l) {
    if (l > 0) {
      yl *= -yt;
      lfac *= l;
    }
    return yl / lfac * reciprocal_gamma(params.alpha + Rational(1) + Rational(l) * params.theta_rat());
  };
  const std::vector<double> A = grow_terms(a_term);
  const std::vector<double> B = grow_terms(b_term);

  double sum = 0.0;
  for (std::size_t k = 0; k < A.size(); ++k) {
    double row = 0.0;
    for (std::size_t l = 0; l < B.size(); ++l)
      row += B[l] / (alpha + 1.0 + static_cast<double>(k) + theta * static_cast<double>(l));
    sum += A[k] * row;
  }

  // both tails decay super-geometrically; first-omitted-term bound
  double abs_a = 0.0, abs_b = 0.0;
  for (double v : A) abs_a += std::abs(v);
  for (double v : B) abs_b += std::abs(v);
  const double tail = 2.0 * theta / (alpha + 1.0) *
                      (std::abs(A.back()) * abs_b + std::abs(B.back()) * abs_a);
  if (head * tail > tol)
    throw NonConvergent("kernel_series: requested tolerance unattainable");

  return theta * head * sum;
}

double kernel_integral(const KernelParams& params, double x, double y, double tol) {
  if (!params.series_valid()) throw DomainError("kernel_integral: alpha must exceed -1");
  if (y < 0.0) throw DomainError("kernel_integral: y must be >= 0");
  if (x < 0.0 || (x == 0.0 && params.alpha < Rational(0)))
    throw DomainError("kernel_integral: x must be > 0 (x = 0 needs alpha >= 0)");

  const double alpha = params.alpha.value();
  const double theta = params.theta();
  const Rational nm(params.n, params.m);

  // series in u of the two Wright-Bessel factors
  std::vector<double> inv_fact{1.0};
  auto fact = [&](int k) {
    while (static_cast<int>(inv_fact.size()) <= k)
      inv_fact.push_back(inv_fact.back() / static_cast<double>(inv_fact.size()));
    return inv_fact[k];
  };
  double xj = 1.0;
  auto s1_coef = [&](int j) {
    if (j > 0) xj *= x;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return sign * xj * fact(j) * reciprocal_gamma((params.alpha + Rational(1 + j)) * nm);
  };
  const double yt = std::pow(y, theta);
  double yj = 1.0;
  auto s2_coef = [&](int j) {
    if (j > 0) yj *= yt;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return sign * yj * fact(j) *
           reciprocal_gamma(params.alpha + Rational(1) + Rational(j) * params.theta_rat());
  };
  const FrobeniusSeries s1 = make_frobenius(Rational(0), Rational(1), 1.0, s1_coef);
  const FrobeniusSeries s2 = make_frobenius(Rational(0), params.theta_rat(), 1.0, s2_coef);

  const double head = theta * std::pow(x, alpha);
  if (head == 0.0) return 0.0;
  const double inner_tol = std::max(tol / std::max(std::abs(head), 1e-6), 1e-14);

  double integral;
  if (alpha >= 0.0) {
    const FrobeniusSeries s1a = shift_exponent(s1, params.alpha);  // u^alpha absorbed
    integral = adaptive_integrate(
        [&](double u) { return s1a.eval(u) * s2.eval(u); }, 0.0, 1.0, inner_tol);
  } else {
    // u = t^(1/(1+alpha)) turns u^alpha du into dt/(1+alpha) exactly
    const double kappa = 1.0 / (1.0 + alpha);
    integral = adaptive_integrate(
                   [&](double t) {
                     const double u = std::pow(t, kappa);
                     return s1.eval(u) * s2.eval(u);
                   },
                   0.0, 1.0, inner_tol) *
               kappa;
  }
  return head * integral;
}

// --- IntegrableKernel -------------------------------------------------------

IntegrableKernel::IntegrableKernel(const KernelParams& params, double x_max)
    : params_(params), coeffs_(b_coeffs(nu_vector(params))) {
  params_.require_integrable();
  const int p = params_.p();
  const Rational nm(params_.n, params_.m);

  std::vector<double> inv_fact{1.0};
  auto fact = [&](int k) {
    while (static_cast<int>(inv_fact.size()) <= k)
      inv_fact.push_back(inv_fact.back() / static_cast<double>(inv_fact.size()));
    return inv_fact[k];
  };

  // f side: x^(alpha+1-m) J_{(alpha+1)n/m, n/m}(x)
  auto f_coef = [&](int j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return sign * fact(j) * reciprocal_gamma((params_.alpha + Rational(1 + j)) * nm);
  };
  const FrobeniusSeries f_side = make_frobenius(
      params_.alpha + Rational(1 - params_.m), Rational(1), x_max, f_coef, 1e-16, p);

  // g side: J_{alpha+1, m/n}(y^(m/n))
  auto g_coef = [&](int j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return sign * fact(j) *
           reciprocal_gamma(params_.alpha + Rational(1) + Rational(j) * params_.theta_rat());
  };
  const FrobeniusSeries g_side = make_frobenius(
      Rational(0), params_.theta_rat(), x_max, g_coef, 1e-16, p);

  df_.reserve(p);
  dg_.reserve(p);
  for (int j = 0; j < p; ++j) {
    df_.push_back(delta_pow(f_side, j));
    dg_.push_back(delta_pow(g_side, j));
  }
}

void IntegrableKernel::inject_b_sign_flip() {
  for (double& v : coeffs_.b) v = -v;
}

double IntegrableKernel::concomitant(double x, double y) const {
  const int p = params_.p();
  std::vector<double> fv(p), gv(p);
  for (int j = 0; j < p; ++j) {
    fv[j] = df_[j].eval(x);
    gv[j] = dg_[j].eval(y);
  }
  std::vector<double> minv(p);
  minv[0] = 1.0;
  for (int i = 1; i < p; ++i) minv[i] = minv[i - 1] / params_.m;

  double outer = 0.0;
  for (int j = 0; j < p; ++j) {
    double inner = 0.0;
    for (int i = 0; i + j <= p - 1; ++i) inner += coeffs_.b[i + j] * minv[i + j] * gv[i];
    outer += ((j % 2 == 0) ? 1.0 : -1.0) * fv[j] * inner;
  }
  const double sign = (params_.n % 2 == 0) ? -1.0 : 1.0;  // (-1)^(n+1)
  return sign * outer;
}

double IntegrableKernel::concomitant_scaled(double t, double x, double y) const {
  if (t <= 0.0) throw DomainError("concomitant_scaled: t must be > 0");
  const double c = std::pow(t, 1.0 / params_.m);
  return concomitant(c * x, c * y);
}

double IntegrableKernel::eval(double x, double y) const {
  if (x <= 0.0 || y < 0.0) throw DomainError("IntegrableKernel::eval: requires x > 0, y >= 0");
  const double xm = std::pow(x, params_.m);
  const double ym = std::pow(y, params_.m);
  const double denom = xm - ym;
  if (std::abs(denom) < eps_diag_ * std::max(1.0, xm))
    throw NearDiagonal("IntegrableKernel::eval: |x^m - y^m| below diagonal guard");
  const double head = std::pow(params_.m, params_.m) * std::pow(params_.n, params_.n - 1) *
                      std::pow(x, params_.m - 1);
  return head * concomitant(x, y) / denom;
}

// --- ScaledKernel -----------------------------------------------------------

ScaledKernel::ScaledKernel(const KernelParams& params, double x_max)
    : params_(params), coeffs_(b_coeffs(nu_vector(params))), x_max_(x_max) {
  params_.require_integrable();
  const int p = params_.p();
  const int m = params_.m;
  const int n = params_.n;
  const double alpha = params_.alpha.value();
  const Rational nm(n, m);

  std::vector<double> inv_fact{1.0};
  auto fact = [&](int k) {
    while (static_cast<int>(inv_fact.size()) <= k)
      inv_fact.push_back(inv_fact.back() / static_cast<double>(inv_fact.size()));
    return inv_fact[k];
  };

  // fT(w) = head_f sum_j (-(m n^(n/m))^1 w^(1/m))^j ... with
  //   head_f = (2 pi)^((m-n)/2) m^(-1/2) n^(n(alpha+1)/m - 1/2)
  const double geo_f = m * std::pow(n, static_cast<double>(n) / m);
  const double head_f =
      std::pow(2.0 * M_PI, 0.5 * (m - n)) * std::pow(m, -0.5) *
      std::pow(n, static_cast<double>(n) * (alpha + 1.0) / m - 0.5);
  double fpow = head_f;
  auto f_coef = [&](int j) {
    if (j > 0) fpow *= -geo_f;
    return fpow * fact(j) * reciprocal_gamma((params_.alpha + Rational(1 + j)) * nm);
  };
  f_tilde_ = make_frobenius((params_.alpha + Rational(1)) / Rational(m) - Rational(1),
                            Rational(1, m), x_max, f_coef, 1e-16, p);

  // gT(w) with head_g = (2 pi)^((n-m)/2) m^(alpha+1/2) n^(-1/2)
  const double geo_g = std::pow(m, static_cast<double>(m) / n) * n;
  const double head_g = std::pow(2.0 * M_PI, 0.5 * (n - m)) * std::pow(m, alpha + 0.5) *
                        std::pow(n, -0.5);
  double gpow = head_g;
  auto g_coef = [&](int j) {
    if (j > 0) gpow *= -geo_g;
    return gpow * fact(j) *
           reciprocal_gamma(params_.alpha + Rational(1) + Rational(j) * params_.theta_rat());
  };
  g_tilde_ = make_frobenius(Rational(0), Rational(1, n), x_max, g_coef, 1e-16, p);

  phi_.reserve(p);
  psi_.reserve(p);
  for (int i = 0; i < p; ++i) {
    FrobeniusSeries d = delta_pow(f_tilde_, i);
    const int par = ((n + 1 - i) % 2 + 2) % 2;  // (-1)^(n+1-i)
    if (par == 1)
      for (double& c : d.coeffs) c = -c;
    phi_.push_back(std::move(d));
  }
  for (int i = 0; i < p; ++i) {
    FrobeniusSeries acc = delta_pow(g_tilde_, 0);
    for (double& c : acc.coeffs) c *= coeffs_.b[i];
    for (int j = 1; j + i <= p - 1; ++j)
      acc = add(acc, delta_pow(g_tilde_, j), coeffs_.b[i + j]);
    psi_.push_back(std::move(acc));
  }
}

void ScaledKernel::inject_b_sign_flip() {
  for (double& v : coeffs_.b) v = -v;
  for (auto& s : psi_)
    for (double& c : s.coeffs) c = -c;
}

double ScaledKernel::phi(int i, double x) const {
  if (i < 0 || i >= params_.p()) throw DomainError("phi: index out of range");
  return phi_[i].eval(x);
}

double ScaledKernel::psi(int i, double y) const {
  if (i < 0 || i >= params_.p()) throw DomainError("psi: index out of range");
  return psi_[i].eval(y);
}

const FrobeniusSeries& ScaledKernel::phi_series(int i) const {
  if (i < 0 || i >= params_.p()) throw DomainError("phi_series: index out of range");
  return phi_[i];
}

const FrobeniusSeries& ScaledKernel::psi_series(int i) const {
  if (i < 0 || i >= params_.p()) throw DomainError("psi_series: index out of range");
  return psi_[i];
}

double ScaledKernel::kernel_iiks(double x, double y) const {
  double num = 0.0;
  for (int i = 0; i < params_.p(); ++i) num += phi_[i].eval(x) * psi_[i].eval(y);
  return num / (x - y);
}

double ScaledKernel::kernel_scaled_series(double x, double y, double tol) const {
  const int m = params_.m;
  const int n = params_.n;
  const double c = m * std::pow(n, static_cast<double>(n) / m);
  const double xs = c * std::pow(x, 1.0 / m);
  const double ys = c * std::pow(y, 1.0 / m);
  return std::pow(n, static_cast<double>(n) / m) * std::pow(x, 1.0 / m - 1.0) *
         kernel_series(params_, xs, ys, tol);
}

double ScaledKernel::kernel(double x, double y) const {
  if (std::abs(x - y) < eps_diag_ * std::max(1.0, std::max(x, y)))
    return kernel_scaled_series(x, y);
  return kernel_iiks(x, y);
}

}  // namespace wbk
