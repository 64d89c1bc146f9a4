#include "wbk/poly.hpp"

#include <algorithm>
#include <cmath>

#include "wbk/errors.hpp"

namespace wbk {

namespace {

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      r.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    } else if (a[i].first < b[j].first) {
      r.push_back(a[i++]);
    } else {
      r.push_back(b[j++]);
    }
  }
  while (i < a.size()) r.push_back(a[i++]);
  while (j < b.size()) r.push_back(b[j++]);
  return r;
}

}  // namespace

Poly Poly::constant(double c) {
  Poly f;
  if (c != 0.0) f.terms[{}] = c;
  return f;
}

Poly Poly::var(std::uint32_t id) {
  Poly f;
  f.terms[{{id, 1}}] = 1.0;
  return f;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms) {
    auto [it, fresh] = terms.emplace(m, c);
    if (!fresh && (it->second += c) == 0.0) terms.erase(it);
  }
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms) {
    auto [it, fresh] = terms.emplace(m, -c);
    if (!fresh && (it->second -= c) == 0.0) terms.erase(it);
  }
  return *this;
}

Poly& Poly::operator*=(double c) {
  if (c == 0.0) {
    terms.clear();
    return *this;
  }
  for (auto& [m, v] : terms) v *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      const Monomial m = mono_mul(ma, mb);
      auto [it, fresh] = r.terms.emplace(m, ca * cb);
      if (!fresh && (it->second += ca * cb) == 0.0) r.terms.erase(it);
    }
  return r;
}

Poly Poly::partial(std::uint32_t id) const {
  Poly r;
  for (const auto& [m, c] : terms) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i].first != id) continue;
      Monomial dm = m;
      const int e = dm[i].second;
      if (e == 1)
        dm.erase(dm.begin() + static_cast<std::ptrdiff_t>(i));
      else
        dm[i].second = e - 1;
      auto [it, fresh] = r.terms.emplace(dm, c * e);
      if (!fresh && (it->second += c * e) == 0.0) r.terms.erase(it);
      break;
    }
  }
  return r;
}

bool Poly::is_zero(double tol) const {
  for (const auto& [m, c] : terms)
    if (std::abs(c) > tol) return false;
  return true;
}

double Poly::max_abs_coeff() const {
  double v = 0.0;
  for (const auto& [m, c] : terms) v = std::max(v, std::abs(c));
  return v;
}

double PhasedValue::odd_magnitude() const { return std::abs(sums[1]) + std::abs(sums[3]); }
double PhasedValue::even_magnitude() const { return std::abs(sums[0]) + std::abs(sums[2]); }

PhasedValue eval_phased(const Poly& f, const CanonicalCoords& c) {
  PhasedValue out;
  for (const auto& [m, coeff] : f.terms) {
    double val = coeff;
    int quad = 0;
    for (const auto& [id, e] : m) {
      double base = 0.0;
      switch (var_kind(id)) {
        case VarKind::Q:
          base = c.q(var_j(id), var_k(id) - 1);
          if (var_k(id) % 2 == 0) quad += e;
          break;
        case VarKind::P:
          base = c.p(var_j(id), var_k(id) - 1);
          if (var_k(id) % 2 == 0) quad += e;
          break;
        case VarKind::U: base = c.u[var_j(id)]; break;
        case VarKind::V: base = c.v[var_j(id)]; break;
      }
      for (int r = 0; r < e; ++r) val *= base;
    }
    out.sums[quad % 4] += val;
  }
  return out;
}

Poly poisson_bracket(const Poly& f, const Poly& g, const std::vector<double>& a, int p,
                     int n_parity) {
  const int two_l = static_cast<int>(a.size());
  Poly r;
  for (int k = 1; k <= two_l; ++k) {
    if (a[k - 1] == 0.0) throw DomainError("poisson_bracket: endpoint a_k must be nonzero");
    const double inv_a = 1.0 / a[k - 1];
    for (int j = 0; j < p; ++j) {
      const auto qid = var_id(VarKind::Q, j, k);
      const auto pid = var_id(VarKind::P, j, k);
      Poly fq = f.partial(qid), gp = g.partial(pid);
      if (!fq.terms.empty() && !gp.terms.empty()) r += (fq * gp) * inv_a;
      Poly fp = f.partial(pid), gq = g.partial(qid);
      if (!fp.terms.empty() && !gq.terms.empty()) r -= (fp * gq) * inv_a;
    }
  }
  const double sign_n = (n_parity % 2 == 0) ? 1.0 : -1.0;
  for (int j = 0; j < p; ++j) {
    const auto uid = var_id(VarKind::U, j);
    const auto vid = var_id(VarKind::V, j);
    Poly fu = f.partial(uid), gv = g.partial(vid);
    if (!fu.terms.empty() && !gv.terms.empty()) r += (fu * gv) * sign_n;
    Poly fv = f.partial(vid), gu = g.partial(uid);
    if (!fv.terms.empty() && !gu.terms.empty()) r -= (fv * gu) * sign_n;
  }
  return r;
}

Poly hamiltonian_poly(const std::vector<double>& a, int k, int p, int n_parity) {
  const int two_l = static_cast<int>(a.size());
  if (k < 1 || k > two_l) throw DomainError("hamiltonian_poly: endpoint index out of range");
  const double ak = a[k - 1];
  const double sign_np1 = (n_parity % 2 == 0) ? -1.0 : 1.0;  // (-1)^(n+1)

  auto q = [&](int j, int kk) { return Poly::var(var_id(VarKind::Q, j, kk)); };
  auto pp = [&](int j, int kk) { return Poly::var(var_id(VarKind::P, j, kk)); };
  auto u = [&](int j) { return Poly::var(var_id(VarKind::U, j)); };
  auto v = [&](int j) { return Poly::var(var_id(VarKind::V, j)); };

  // (-sum_j v_j p_{j,k} + (-1)^(n+1) a_k p_{p-1,k}) q_{0,k}
  Poly head;
  for (int j = 0; j < p; ++j) head -= v(j) * pp(j, k);
  head += pp(p - 1, k) * (sign_np1 * ak);
  Poly h = head * q(0, k);

  // + sum_j u_j q_{j,k} p_{p-1,k}
  for (int j = 0; j < p; ++j) h += u(j) * q(j, k) * pp(p - 1, k);

  // - sum_{j=0}^{p-2} q_{j+1,k} p_{j,k}
  for (int j = 0; j <= p - 2; ++j) h -= q(j + 1, k) * pp(j, k);

  // + sum_{i != k} a_i/(a_k - a_i) sum_{kap, j} q_{kap,k} p_{kap,i} q_{j,i} p_{j,k}
  for (int i = 1; i <= two_l; ++i) {
    if (i == k) continue;
    const double w = a[i - 1] / (ak - a[i - 1]);
    if (w == 0.0) continue;
    for (int kap = 0; kap < p; ++kap)
      for (int j = 0; j < p; ++j)
        h += q(kap, k) * pp(kap, i) * q(j, i) * pp(j, k) * w;
  }
  return h;
}

}  // namespace wbk
