#include "wbk/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wbk/errors.hpp"
#include "wbk/gamma.hpp"
#include "wbk/quadrature.hpp"
#include "wbk/simd.hpp"

namespace wbk {

IntervalUnion::IntervalUnion(std::vector<double> e) : endpoints(std::move(e)) {
  if (endpoints.empty() || endpoints.size() % 2 != 0)
    throw DomainError("IntervalUnion: need an even, nonzero number of endpoints");
  if (endpoints.front() < 0.0) throw DomainError("IntervalUnion: endpoints must be >= 0");
  for (std::size_t i = 1; i < endpoints.size(); ++i)
    if (endpoints[i] < endpoints[i - 1])
      throw DomainError("IntervalUnion: endpoints must be nondecreasing");
}

double IntervalUnion::total_length() const {
  double len = 0.0;
  for (int j = 0; j < pairs(); ++j) len += endpoints[2 * j + 1] - endpoints[2 * j];
  return len;
}

IntervalUnion IntervalUnion::perturbed(int k, double h) const {
  if (k < 1 || k > static_cast<int>(endpoints.size()))
    throw DomainError("IntervalUnion::perturbed: endpoint index out of range");
  std::vector<double> e = endpoints;
  e[k - 1] += h;
  return IntervalUnion(e);
}

int smoothing_exponent(const KernelParams& params) {
  const Rational rho_f = (params.alpha + Rational(1)) / Rational(params.m) - Rational(1);
  long long r = std::lcm(static_cast<long long>(params.m), static_cast<long long>(params.n));
  const long long full = std::lcm(r, rho_f.den());
  if (full <= 16) r = full;  // otherwise clear only the series lattice
  return static_cast<int>(r);
}

NystromGrid build_grid(const IntervalUnion& J, int order, int left_smooth) {
  if (order < 1) throw DomainError("build_grid: order must be positive");
  if (left_smooth < 1) throw DomainError("build_grid: smoothing exponent must be >= 1");
  NystromGrid g;
  g.order = order;
  std::vector<double> x, w;
  for (int j = 0; j < J.pairs(); ++j) {
    const double a = J.endpoints[2 * j];
    const double b = J.endpoints[2 * j + 1];
    if (b - a <= 0.0) continue;  // degenerate interval contributes nothing
    const bool at_origin = a <= 1e-3 * (b - a);
    if (at_origin && left_smooth > 1) {
      gauss_legendre_on(order, 0.0, 1.0, x, w);
      for (int i = 0; i < order; ++i) {
        const double t = x[i];
        const double tp = std::pow(t, left_smooth - 1);
        g.x.push_back(a + (b - a) * tp * t);
        g.w.push_back((b - a) * left_smooth * tp * w[i]);
      }
    } else {
      gauss_legendre_on(order, a, b, x, w);
      g.x.insert(g.x.end(), x.begin(), x.end());
      g.w.insert(g.w.end(), w.begin(), w.end());
    }
  }
  g.sw.resize(g.w.size());
  for (std::size_t i = 0; i < g.w.size(); ++i) g.sw[i] = std::sqrt(g.w[i]);
  return g;
}

namespace {

// phi_r / psi_r tabulated on the grid, rows r = 0..m+n-1.
void tabulate(const ScaledKernel& K, const std::vector<double>& x, Matrix& phi, Matrix& psi) {
  const int p = K.params().p();
  const int N = static_cast<int>(x.size());
  phi = Matrix(p, N);
  psi = Matrix(p, N);
  for (int r = 0; r < p; ++r) {
    K.phi_series(r).eval_many(x, {phi.row(r), static_cast<std::size_t>(N)});
    K.psi_series(r).eval_many(x, {psi.row(r), static_cast<std::size_t>(N)});
  }
}

// B = I - diag(sw) K~ diag(sw) on the grid.
Matrix assemble(const ScaledKernel& K, const NystromGrid& g) {
  const int N = static_cast<int>(g.x.size());
  const int p = K.params().p();
  Matrix phi, psi;
  tabulate(K, g.x, phi, psi);

  Matrix B(N, N);
  std::vector<double> numer(N);
  const double guard = 1e-6;
  for (int i = 0; i < N; ++i) {
    std::fill(numer.begin(), numer.end(), 0.0);
    for (int r = 0; r < p; ++r) simd::axpy(phi(r, i), psi.row(r), numer.data(), N);
    double* row = B.row(i);
    for (int j = 0; j < N; ++j) {
      const double dx = g.x[i] - g.x[j];
      double kij;
      if (std::abs(dx) < guard * std::max(1.0, std::max(g.x[i], g.x[j])))
        kij = K.kernel_scaled_series(g.x[i], g.x[j]);
      else
        kij = numer[j] / dx;
      row[j] = (i == j ? 1.0 : 0.0) - g.sw[i] * kij * g.sw[j];
    }
  }
  return B;
}

}  // namespace

double fredholm_det(const ScaledKernel& K, const IntervalUnion& J, int order) {
  if (order < 4) throw DomainError("fredholm_det: order must be >= 4");
  const NystromGrid g = build_grid(J, order, smoothing_exponent(K.params()));
  if (g.x.empty()) return 1.0;
  return lu_factor(assemble(K, g)).det();
}

double gap_probability(const ScaledKernel& K, double s, int order) {
  if (s < 0.0) throw DomainError("gap_probability: s must be >= 0");
  if (s == 0.0) return 1.0;
  const double S = K.params().scale_to_tilde(s);
  return fredholm_det(K, IntervalUnion(0.0, S), order);
}

double small_s_log_asymptote(const KernelParams& params, double s) {
  const double alpha = params.alpha.value();
  const double theta = params.theta();
  return -theta * std::pow(s, alpha + 1.0) /
         (gamma_fn((alpha + 1.0) / theta) * gamma_fn(alpha + 1.0) * (alpha + 1.0) * (alpha + 1.0));
}

double small_s_asymptote(const KernelParams& params, double s) {
  return std::exp(small_s_log_asymptote(params, s));
}

ResolventQuantities resolvent_quantities(const ScaledKernel& K, const IntervalUnion& J,
                                         int order) {
  if (order < 8) throw DomainError("resolvent_quantities: order must be >= 8");
  const int p = K.params().p();
  const int two_l = static_cast<int>(J.endpoints.size());
  const int npar = (K.params().n % 2 == 0) ? 1 : -1;  // (-1)^n

  ResolventQuantities rq;
  rq.J = J;
  rq.grid = build_grid(J, order, smoothing_exponent(K.params()));
  const int N = static_cast<int>(rq.grid.x.size());
  if (N == 0) throw DomainError("resolvent_quantities: empty interval union");

  const LuFactors lu = lu_factor(assemble(K, rq.grid));
  rq.det = lu.det();

  Matrix phi, psi;
  tabulate(K, rq.grid.x, phi, psi);

  // (I - K W)^-1 = D^-1 B^-1 D and (I - K^T W)^-1 = D^-1 B^-T D, D = diag(sw)
  rq.Qn = Matrix(p, N);
  rq.Pn = Matrix(p, N);
  std::vector<double> rhs(N);
  for (int r = 0; r < p; ++r) {
    for (int i = 0; i < N; ++i) rhs[i] = rq.grid.sw[i] * phi(r, i);
    std::vector<double> q = lu.solve(rhs);
    for (int i = 0; i < N; ++i) rq.Qn(r, i) = q[i] / rq.grid.sw[i];
    for (int i = 0; i < N; ++i) rhs[i] = rq.grid.sw[i] * psi(r, i);
    std::vector<double> pv = lu.solve_transposed(rhs);
    for (int i = 0; i < N; ++i) rq.Pn(r, i) = pv[i] / rq.grid.sw[i];
  }

  rq.w_ij = Matrix(p, p);
  std::vector<double> wphi(N);
  for (int i = 0; i < p; ++i) {
    for (int l = 0; l < N; ++l) wphi[l] = rq.grid.w[l] * phi(i, l);
    for (int j = 0; j < p; ++j) rq.w_ij(i, j) = simd::dot(wphi.data(), rq.Pn.row(j), N);
  }

  rq.u.resize(p);
  rq.v.resize(p);
  const ConcomitantCoeffs& bc = K.coeffs();
  for (int j = 0; j < p; ++j) {
    rq.u[j] = npar * rq.w_ij(0, j) + bc.b_prev(j);
    rq.v[j] = npar * rq.w_ij(j, p - 1);
  }

  rq.x_jk = Matrix(p, two_l);
  rq.y_jk = Matrix(p, two_l);
  for (int k = 0; k < two_l; ++k) {
    const double a = J.endpoints[k];
    for (int j = 0; j < p; ++j) {
      try {
        rq.x_jk(j, k) = q_value(K, rq, j, a);
      } catch (const DomainError&) {
        rq.x_jk(j, k) = std::numeric_limits<double>::quiet_NaN();
      }
      try {
        rq.y_jk(j, k) = p_value(K, rq, j, a);
      } catch (const DomainError&) {
        rq.y_jk(j, k) = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return rq;
}

double q_value(const ScaledKernel& K, const ResolventQuantities& rq, int j, double x) {
  const int N = static_cast<int>(rq.grid.x.size());
  double acc = K.phi(j, x);
  for (int l = 0; l < N; ++l)
    acc += rq.grid.w[l] * K.kernel(x, rq.grid.x[l]) * rq.Qn(j, l);
  return acc;
}

double p_value(const ScaledKernel& K, const ResolventQuantities& rq, int j, double y) {
  const int N = static_cast<int>(rq.grid.x.size());
  double acc = K.psi(j, y);
  for (int l = 0; l < N; ++l)
    acc += rq.grid.w[l] * K.kernel(rq.grid.x[l], y) * rq.Pn(j, l);
  return acc;
}

double resolvent_kernel(const ScaledKernel& K, const ResolventQuantities& rq, double x,
                        double y) {
  const int p = K.params().p();
  const double guard = 1e-6 * std::max(1.0, std::max(std::abs(x), std::abs(y)));
  if (std::abs(x - y) >= guard) {
    double num = 0.0;
    for (int j = 0; j < p; ++j) num += q_value(K, rq, j, x) * p_value(K, rq, j, y);
    return num / (x - y);
  }
  // diagonal: sum_j Q_j'(x) P_j(x), Q' by a 5-point stencil on the
  // Nystrom interpolant (smooth in x; the cutoff lives in the y slot)
  const double h = 1e-4 * std::max(1.0, std::abs(x));
  double r = 0.0;
  for (int j = 0; j < p; ++j) {
    const double qm2 = q_value(K, rq, j, x - 2 * h);
    const double qm1 = q_value(K, rq, j, x - h);
    const double qp1 = q_value(K, rq, j, x + h);
    const double qp2 = q_value(K, rq, j, x + 2 * h);
    const double dq = (qm2 - 8.0 * qm1 + 8.0 * qp1 - qp2) / (12.0 * h);
    r += dq * p_value(K, rq, j, x);
  }
  return r;
}

}  // namespace wbk
