#include "wbk/pde_verify.hpp"

#include <cmath>

#include "wbk/errors.hpp"

namespace wbk {

double PdeResidualReport::max_residual() const {
  double r = 0.0;
  for (const Family& f : families) r = std::max(r, f.residual);
  return r;
}

const PdeResidualReport::Family& PdeResidualReport::family(const std::string& name) const {
  for (const Family& f : families)
    if (f.name == name) return f;
  throw DomainError("PdeResidualReport: unknown family " + name);
}

namespace {

bool usable(double v) { return std::isfinite(v); }

struct FdData {
  ResolventQuantities center;
  // plus[i-1], minus[i-1]: quantities with endpoint a_i shifted by +/- h
  std::vector<ResolventQuantities> plus, minus;
  double h;
};

FdData fd_data(const ScaledKernel& K, const IntervalUnion& J, int order, double h) {
  FdData d;
  d.h = h;
  d.center = resolvent_quantities(K, J, order);
  const int two_l = static_cast<int>(J.endpoints.size());
  d.plus.reserve(two_l);
  d.minus.reserve(two_l);
  for (int i = 1; i <= two_l; ++i) {
    d.plus.push_back(resolvent_quantities(K, J.perturbed(i, +h), order));
    d.minus.push_back(resolvent_quantities(K, J.perturbed(i, -h), order));
  }
  return d;
}

}  // namespace

PdeResidualReport pde_residuals(const ScaledKernel& K, const IntervalUnion& J, int order,
                                double h) {
  const int p = K.params().p();
  const int two_l = static_cast<int>(J.endpoints.size());
  const int n = K.params().n;
  const std::vector<double>& a = J.endpoints;
  const FdData d = fd_data(K, J, order, h);
  const ResolventQuantities& c = d.center;

  auto dxa = [&](int j, int k, int i) {  // d x_{j,k} / d a_i, all 0-based except i,k 1-based
    return (d.plus[i - 1].x_jk(j, k - 1) - d.minus[i - 1].x_jk(j, k - 1)) / (2.0 * h);
  };
  auto dya = [&](int j, int k, int i) {
    return (d.plus[i - 1].y_jk(j, k - 1) - d.minus[i - 1].y_jk(j, k - 1)) / (2.0 * h);
  };
  auto sgn = [](int i) { return (i % 2 == 0) ? 1.0 : -1.0; };  // (-1)^i, i 1-based
  auto cross_xy = [&](int k, int i) {  // sum_l x_{l,k} y_{l,i}
    double s = 0.0;
    for (int l = 0; l < p; ++l) s += c.x_jk(l, k - 1) * c.y_jk(l, i - 1);
    return s;
  };

  PdeResidualReport rep;
  auto push = [&rep](const std::string& name, double r) { rep.families.push_back({name, r}); };

  // off-diagonal endpoint derivatives
  double rx = 0.0, ry = 0.0;
  for (int k = 1; k <= two_l; ++k)
    for (int i = 1; i <= two_l; ++i) {
      if (i == k) continue;
      for (int j = 0; j < p; ++j) {
        const double lhs_x = dxa(j, k, i);
        const double rhs_x = sgn(i) * c.x_jk(j, i - 1) / (a[k - 1] - a[i - 1]) * cross_xy(k, i);
        if (usable(lhs_x) && usable(rhs_x)) rx = std::max(rx, std::abs(lhs_x - rhs_x));
        const double lhs_y = dya(j, k, i);
        const double rhs_y = sgn(i) * c.y_jk(j, i - 1) / (a[i - 1] - a[k - 1]) * cross_xy(i, k);
        if (usable(lhs_y) && usable(rhs_y)) ry = std::max(ry, std::abs(lhs_y - rhs_y));
      }
    }
  push("x_offdiag", rx);
  push("y_offdiag", ry);

  // same-endpoint derivatives
  auto offsum_x = [&](int j, int k) {  // sum_{i != k} (-1)^i a_i x_{j,i}/(a_k-a_i) sum_l x_{l,k} y_{l,i}
    double s = 0.0;
    for (int i = 1; i <= two_l; ++i) {
      if (i == k) continue;
      s += sgn(i) * a[i - 1] * c.x_jk(j, i - 1) / (a[k - 1] - a[i - 1]) * cross_xy(k, i);
    }
    return s;
  };
  auto offsum_y = [&](int j, int k) {
    double s = 0.0;
    for (int i = 1; i <= two_l; ++i) {
      if (i == k) continue;
      s += sgn(i) * a[i - 1] * c.y_jk(j, i - 1) / (a[i - 1] - a[k - 1]) * cross_xy(i, k);
    }
    return s;
  };
  const double sn = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n

  double rxd = 0.0, rxt = 0.0, ryd = 0.0, ry0 = 0.0;
  for (int k = 1; k <= two_l; ++k) {
    const double ak = a[k - 1];
    for (int j = 0; j <= p - 2; ++j) {
      const double lhs = ak * dxa(j, k, k);
      const double rhs =
          -c.v[j] * c.x_jk(0, k - 1) - c.x_jk(j + 1, k - 1) - offsum_x(j, k);
      if (usable(lhs) && usable(rhs)) rxd = std::max(rxd, std::abs(lhs - rhs));
    }
    {
      double sum_ux = 0.0;
      for (int i = 0; i < p; ++i) sum_ux += c.u[i] * c.x_jk(i, k - 1);
      const double lhs = ak * dxa(p - 1, k, k);
      const double rhs = (-sn * ak - c.v[p - 1]) * c.x_jk(0, k - 1) + sum_ux - offsum_x(p - 1, k);
      if (usable(lhs) && usable(rhs)) rxt = std::max(rxt, std::abs(lhs - rhs));
    }
    for (int j = 1; j <= p - 1; ++j) {
      const double lhs = ak * dya(j, k, k);
      const double rhs =
          c.y_jk(j - 1, k - 1) - c.u[j] * c.y_jk(p - 1, k - 1) - offsum_y(j, k);
      if (usable(lhs) && usable(rhs)) ryd = std::max(ryd, std::abs(lhs - rhs));
    }
    {
      double sum_vy = 0.0;
      for (int i = 0; i < p; ++i) sum_vy += c.v[i] * c.y_jk(i, k - 1);
      const double lhs = ak * dya(0, k, k);
      const double rhs = sum_vy + (sn * ak - c.u[0]) * c.y_jk(p - 1, k - 1) - offsum_y(0, k);
      if (usable(lhs) && usable(rhs)) ry0 = std::max(ry0, std::abs(lhs - rhs));
    }
  }
  push("x_diag", rxd);
  push("x_diag_top", rxt);
  push("y_diag", ryd);
  push("y_diag_zero", ry0);

  // moment derivatives
  double ru = 0.0, rv = 0.0, rw = 0.0;
  for (int k = 1; k <= two_l; ++k) {
    const double snk = ((n + k) % 2 == 0) ? 1.0 : -1.0;  // (-1)^(n+k)
    for (int j = 0; j < p; ++j) {
      const double du = (d.plus[k - 1].u[j] - d.minus[k - 1].u[j]) / (2.0 * d.h);
      const double eu = snk * c.x_jk(0, k - 1) * c.y_jk(j, k - 1);
      if (usable(du) && usable(eu)) ru = std::max(ru, std::abs(du - eu));
      const double dv = (d.plus[k - 1].v[j] - d.minus[k - 1].v[j]) / (2.0 * d.h);
      const double ev = snk * c.x_jk(j, k - 1) * c.y_jk(p - 1, k - 1);
      if (usable(dv) && usable(ev)) rv = std::max(rv, std::abs(dv - ev));
    }
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        const double dw =
            (d.plus[k - 1].w_ij(i, j) - d.minus[k - 1].w_ij(i, j)) / (2.0 * d.h);
        const double ew = sgn(k) * c.x_jk(i, k - 1) * c.y_jk(j, k - 1);
        if (usable(dw) && usable(ew)) rw = std::max(rw, std::abs(dw - ew));
      }
  }
  push("du", ru);
  push("dv", rv);
  push("dw", rw);

  return rep;
}

CanonicalCoords canonical_coords(const ResolventQuantities& rq) {
  CanonicalCoords c;
  c.q = rq.x_jk;
  c.p = rq.y_jk;
  c.u = rq.u;
  c.v = rq.v;
  c.a = rq.J.endpoints;
  return c;
}

double hamiltonian(const ScaledKernel& K, const CanonicalCoords& coords, int k) {
  const Poly h = hamiltonian_poly(coords.a, k, K.params().p(), K.params().n);
  return eval_phased(h, coords).real_part();
}

double involution_check(const ScaledKernel& K, const CanonicalCoords& coords, int i, int j) {
  const int p = K.params().p();
  const int n = K.params().n;
  const Poly hi = hamiltonian_poly(coords.a, i, p, n);
  const Poly hj = hamiltonian_poly(coords.a, j, p, n);
  const Poly br = poisson_bracket(hi, hj, coords.a, p, n);
  return eval_phased(br, coords).real_part();
}

double hamilton_equations_residual(const ScaledKernel& K, const IntervalUnion& J, int order,
                                   double h) {
  const int p = K.params().p();
  const int n = K.params().n;
  const int two_l = static_cast<int>(J.endpoints.size());
  const FdData d = fd_data(K, J, order, h);
  const CanonicalCoords coords = canonical_coords(d.center);

  double worst = 0.0;
  for (int i = 1; i <= two_l; ++i) {
    const Poly hi = hamiltonian_poly(coords.a, i, p, n);
    for (int k = 1; k <= two_l; ++k) {
      const bool even_k = (k % 2 == 0);
      for (int j = 0; j < p; ++j) {
        const Poly bq =
            poisson_bracket(Poly::var(var_id(VarKind::Q, j, k)), hi, coords.a, p, n);
        const PhasedValue pv = eval_phased(bq, coords);
        const double got = even_k ? pv.minus_i_part() : pv.real_part();
        const double fd =
            (d.plus[i - 1].x_jk(j, k - 1) - d.minus[i - 1].x_jk(j, k - 1)) / (2.0 * h);
        if (usable(got) && usable(fd)) worst = std::max(worst, std::abs(got - fd));

        const Poly bp =
            poisson_bracket(Poly::var(var_id(VarKind::P, j, k)), hi, coords.a, p, n);
        const PhasedValue pw = eval_phased(bp, coords);
        const double gotp = even_k ? pw.minus_i_part() : pw.real_part();
        const double fdp =
            (d.plus[i - 1].y_jk(j, k - 1) - d.minus[i - 1].y_jk(j, k - 1)) / (2.0 * h);
        if (usable(gotp) && usable(fdp)) worst = std::max(worst, std::abs(gotp - fdp));
      }
    }
    for (int j = 0; j < p; ++j) {
      const Poly bu = poisson_bracket(Poly::var(var_id(VarKind::U, j)), hi, coords.a, p, n);
      const double got = eval_phased(bu, coords).real_part();
      const double fd = (d.plus[i - 1].u[j] - d.minus[i - 1].u[j]) / (2.0 * h);
      worst = std::max(worst, std::abs(got - fd));
      const Poly bv = poisson_bracket(Poly::var(var_id(VarKind::V, j)), hi, coords.a, p, n);
      const double gotv = eval_phased(bv, coords).real_part();
      const double fdv = (d.plus[i - 1].v[j] - d.minus[i - 1].v[j]) / (2.0 * h);
      worst = std::max(worst, std::abs(gotv - fdv));
    }
  }
  return worst;
}

}  // namespace wbk
