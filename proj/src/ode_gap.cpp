#include "wbk/ode_gap.hpp"

#include <algorithm>
#include <cmath>

#include "wbk/errors.hpp"

namespace wbk {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = 35.0 / 384 - 5179.0 / 57600, kE3 = 500.0 / 1113 - 7571.0 / 16695,
                 kE4 = 125.0 / 192 - 393.0 / 640, kE5 = -2187.0 / 6784 + 92097.0 / 339200,
                 kE6 = 11.0 / 84 - 187.0 / 2100, kE7 = -1.0 / 40;
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;

// product of two Frobenius series as (exponent, coefficient) pairs, a few
// leading terms of each factor (enough for the tiny-argument tails)
struct PowerTerm {
  double e, c;
};

std::vector<PowerTerm> leading_product(const FrobeniusSeries& a, const FrobeniusSeries& b,
                                       int take = 12) {
  std::vector<PowerTerm> terms;
  const int na = std::min<int>(take, static_cast<int>(a.coeffs.size()));
  const int nb = std::min<int>(take, static_cast<int>(b.coeffs.size()));
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      terms.push_back({a.exponent(i).value() + b.exponent(j).value(),
                       a.coeffs[i] * b.coeffs[j]});
  return terms;
}

}  // namespace

GapOdeSolver::GapOdeSolver(const ScaledKernel& K)
    : K_(&K), p_(K.params().p()), npar_((K.params().n % 2 == 0) ? 1 : -1) {}

GapState GapOdeSolver::rhs(const GapState& state) const {
  if (state.s <= 0.0) throw DomainError("GapOdeSolver::rhs: s must be > 0");
  const int p = p_;
  const double s = state.s;
  GapState d;
  d.s = s;
  d.x.resize(p);
  d.y.resize(p);
  d.u.resize(p);
  d.v.resize(p);
  for (int j = 0; j <= p - 2; ++j) d.x[j] = (-state.v[j] * state.x[0] - state.x[j + 1]) / s;
  double sum_ux = 0.0;
  for (int i = 0; i < p; ++i) sum_ux += state.u[i] * state.x[i];
  d.x[p - 1] = ((-npar_ * s - state.v[p - 1]) * state.x[0] + sum_ux) / s;
  for (int j = 1; j <= p - 1; ++j)
    d.y[j] = (state.y[j - 1] - state.u[j] * state.y[p - 1]) / s;
  double sum_vy = 0.0;
  for (int i = 0; i < p; ++i) sum_vy += state.v[i] * state.y[i];
  d.y[0] = (sum_vy + (npar_ * s - state.u[0]) * state.y[p - 1]) / s;
  for (int j = 0; j < p; ++j) {
    d.u[j] = npar_ * state.x[0] * state.y[j];
    d.v[j] = npar_ * state.x[j] * state.y[p - 1];
  }
  return d;
}

GapState GapOdeSolver::init_state(double s0) const {
  if (s0 <= 0.0) throw DomainError("init_state: s0 must be > 0");
  const int p = p_;
  GapState st;
  st.s = s0;
  st.x.resize(p);
  st.y.resize(p);
  st.u.resize(p);
  st.v.resize(p);
  for (int j = 0; j < p; ++j) {
    st.x[j] = K_->phi(j, s0);
    st.y[j] = K_->psi(j, s0);
    st.u[j] = K_->coeffs().b_prev(j);
    st.v[j] = 0.0;
  }
  return st;
}

double GapOdeSolver::default_s0() const {
  const FrobeniusSeries& f = K_->phi_series(0);
  const double c0 = f.coeffs.at(0);
  int k1 = -1;
  for (std::size_t k = 1; k < f.coeffs.size(); ++k)
    if (f.coeffs[k] != 0.0) {
      k1 = static_cast<int>(k);
      break;
    }
  if (k1 < 0 || c0 == 0.0) return 1e-8;
  const double step = (f.exponent(k1) - f.exponent(0)).value();
  const double s0 = std::pow(1e-8 * std::abs(c0 / f.coeffs[k1]), 1.0 / step);
  // floor at 1e-16: the init data uses the full truncated series, so a
  // deeper start only adds log-time range over which local integrator
  // noise gets amplified along the fast-growing modes
  return std::clamp(s0, 1e-16, 1e-2);
}

void GapOdeSolver::rhs_sigma(double sigma, const std::vector<double>& z,
                             std::vector<double>& out) const {
  const int p = p_;
  const double s = std::exp(sigma);
  const double* x = z.data();
  const double* y = x + p;
  const double* u = y + p;
  const double* v = u + p;
  double* dx = out.data();
  double* dy = dx + p;
  double* du = dy + p;
  double* dv = du + p;
  for (int j = 0; j <= p - 2; ++j) dx[j] = -v[j] * x[0] - x[j + 1];
  double sum_ux = 0.0;
  for (int i = 0; i < p; ++i) sum_ux += u[i] * x[i];
  dx[p - 1] = (-npar_ * s - v[p - 1]) * x[0] + sum_ux;
  for (int j = 1; j <= p - 1; ++j) dy[j] = y[j - 1] - u[j] * y[p - 1];
  double sum_vy = 0.0;
  for (int i = 0; i < p; ++i) sum_vy += v[i] * y[i];
  dy[0] = sum_vy + (npar_ * s - u[0]) * y[p - 1];
  for (int j = 0; j < p; ++j) {
    du[j] = s * npar_ * x[0] * y[j];
    dv[j] = s * npar_ * x[j] * y[p - 1];
  }
  if (out.size() == z.size() && z.size() == static_cast<std::size_t>(4 * p + 2)) {
    out[4 * p] = v[0];                             // d/dsigma int v_0
    out[4 * p + 1] = sigma * x[0] * y[p - 1] * s;  // d/dsigma int ln(t) x_0 y dt
  }
}

std::vector<GapState> GapOdeSolver::integrate_impl(double s0, double s1, double tol,
                                                   Quad* quad) const {
  if (!(0.0 < s0 && s0 < s1)) throw DomainError("integrate: need 0 < s0 < s1");
  if (tol <= 0.0) throw DomainError("integrate: tol must be positive");
  const int p = p_;
  const std::size_t dim = static_cast<std::size_t>(4 * p) + (quad ? 2 : 0);

  const GapState st0 = init_state(s0);
  std::vector<double> z(dim, 0.0);
  for (int j = 0; j < p; ++j) {
    z[j] = st0.x[j];
    z[p + j] = st0.y[j];
    z[2 * p + j] = st0.u[j];
    z[3 * p + j] = st0.v[j];
  }

  auto unpack = [&](double sigma, const std::vector<double>& zz) {
    GapState st;
    st.s = std::exp(sigma);
    st.x.assign(zz.begin(), zz.begin() + p);
    st.y.assign(zz.begin() + p, zz.begin() + 2 * p);
    st.u.assign(zz.begin() + 2 * p, zz.begin() + 3 * p);
    st.v.assign(zz.begin() + 3 * p, zz.begin() + 4 * p);
    return st;
  };

  const double sig0 = std::log(s0), sig1 = std::log(s1);
  std::vector<GapState> traj{unpack(sig0, z)};

  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), tmp(dim),
      znew(dim);
  const double atol = tol * 1e-2, rtol = tol;
  double sigma = sig0;
  double h = (sig1 - sig0) / 64.0;
  const double hmin = (sig1 - sig0) * 1e-12;
  rhs_sigma(sigma, z, k1);

  for (long steps = 0; sigma < sig1; ++steps) {
    if (steps > 2000000) throw StepFailure("integrate: step budget exhausted");
    h = std::min(h, sig1 - sigma);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = z[i] + h * kA21 * k1[i];
    rhs_sigma(sigma + kC2 * h, tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = z[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
    rhs_sigma(sigma + kC3 * h, tmp, k3);
    for (std::size_t i = 0; i < dim; ++i)
      tmp[i] = z[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    rhs_sigma(sigma + kC4 * h, tmp, k4);
    for (std::size_t i = 0; i < dim; ++i)
      tmp[i] = z[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
    rhs_sigma(sigma + kC5 * h, tmp, k5);
    for (std::size_t i = 0; i < dim; ++i)
      tmp[i] = z[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] +
                           kA65 * k5[i]);
    rhs_sigma(sigma + h, tmp, k6);
    for (std::size_t i = 0; i < dim; ++i)
      znew[i] = z[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] + kB5 * k5[i] + kB6 * k6[i]);
    rhs_sigma(sigma + h, znew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                            kE6 * k6[i] + kE7 * k7[i]);
      const double sc = atol + rtol * std::max(std::abs(z[i]), std::abs(znew[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / static_cast<double>(dim));

    if (err <= 1.0) {
      sigma += h;
      z.swap(znew);
      k1.swap(k7);  // FSAL
      traj.push_back(unpack(sigma, z));
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
    h *= fac;
    if (h < hmin) throw StepFailure("integrate: step size underflow");
  }

  if (quad) {
    quad->iv = z[4 * p];
    quad->jlog = z[4 * p + 1];
  }
  return traj;
}

std::vector<GapState> GapOdeSolver::integrate(double s0, double s1, double tol) const {
  return integrate_impl(s0, s1, tol, nullptr);
}

GapOdeResult GapOdeSolver::gap(double s, double tol) const {
  if (s < 0.0) throw DomainError("gap: s must be >= 0");
  if (s == 0.0) return {1.0, 1.0, 0.0};
  const double S = K_->params().scale_to_tilde(s);
  const std::vector<PowerTerm> prod =
      leading_product(K_->phi_series(0), K_->psi_series(p_ - 1));

  auto tail_A = [&](double tau) {
    double a = 0.0;
    for (const PowerTerm& t : prod) a += t.c * std::pow(tau, t.e + 1.0) / (t.e + 1.0);
    return a;
  };
  auto tail_iv = [&](double tau) {
    double a = 0.0;
    for (const PowerTerm& t : prod)
      a += t.c * std::pow(tau, t.e + 1.0) / ((t.e + 1.0) * (t.e + 1.0));
    return npar_ * a;
  };
  auto tail_jlog = [&](double tau) {
    const double lt = std::log(tau);
    double a = 0.0;
    for (const PowerTerm& t : prod)
      a += t.c * std::pow(tau, t.e + 1.0) *
           (lt / (t.e + 1.0) - 1.0 / ((t.e + 1.0) * (t.e + 1.0)));
    return a;
  };

  double s0 = default_s0();
  GapOdeResult res{};
  if (S <= s0 * 2.0) {
    // series regime throughout
    const double log_f2 = tail_iv(S);
    const double log_f1 = npar_ * (std::log(S) * tail_A(S) - tail_jlog(S));
    res.F = std::exp(log_f2);
    res.F_log_weight = std::exp(log_f1);
    res.discrepancy = std::abs(res.F - res.F_log_weight);
    return res;
  }

  Quad quad;
  // tighter internal control than the requested gap accuracy: local errors
  // seeded deep in the log-time range get amplified by the growing
  // characteristic modes before reaching S
  const double itol = std::min(tol, 1e-13);
  const std::vector<GapState> traj = integrate_impl(s0, S, itol, &quad);
  const GapState& end = traj.back();

  const double log_f2 = tail_iv(s0) + quad.iv;
  const double a_total = tail_A(s0) + npar_ * end.v[0];
  const double b_total = tail_jlog(s0) + quad.jlog;
  const double log_f1 = npar_ * (std::log(S) * a_total - b_total);

  res.F = std::exp(log_f2);
  res.F_log_weight = std::exp(log_f1);
  res.discrepancy = std::abs(res.F - res.F_log_weight);
  return res;
}

double gap_via_ode(const ScaledKernel& K, double s, double tol) {
  return GapOdeSolver(K).gap(s, tol).F;
}

}  // namespace wbk
