#include "wbk/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "wbk/errors.hpp"
#include "wbk/simd.hpp"

namespace wbk {

namespace {

GaussLegendre compute_rule(int n) {
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = -p1 / pp;
      z += dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return rule;
}

std::mutex g_rule_mutex;
std::map<int, GaussLegendre> g_rules;

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  auto it = g_rules.find(order);
  if (it == g_rules.end()) it = g_rules.emplace(order, compute_rule(order)).first;
  return it->second;
}

void gauss_legendre_on(int order, double a, double b, std::vector<double>& x,
                       std::vector<double>& w) {
  const GaussLegendre& rule = gauss_legendre(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  x.resize(order);
  w.resize(order);
  for (int i = 0; i < order; ++i) {
    x[i] = mid + half * rule.nodes[i];
    w[i] = half * rule.weights[i];
  }
}

namespace {

double panel_integral(const std::function<double(double)>& f, double a, double b, int order,
                      std::vector<double>& fx) {
  std::vector<double> x, w;
  gauss_legendre_on(order, a, b, x, w);
  fx.resize(order);
  for (int i = 0; i < order; ++i) fx[i] = f(x[i]);
  return simd::dot(w.data(), fx.data(), order);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol,
                          int base_order, int max_panels) {
  if (tol <= 0.0) throw DomainError("adaptive_integrate: tol must be positive");
  if (a == b) return 0.0;
  struct Panel {
    double a, b, coarse;
  };
  std::vector<double> scratch;
  std::vector<Panel> todo{{a, b, panel_integral(f, a, b, base_order, scratch)}};
  double total = 0.0;
  int used = 1;
  while (!todo.empty()) {
    const Panel p = todo.back();
    todo.pop_back();
    const double fine = panel_integral(f, p.a, p.b, 2 * base_order, scratch);
    const double err = std::abs(fine - p.coarse);
    // local budget proportional to panel share of the full interval
    const double local_tol = tol * std::max(1e-3, (p.b - p.a) / (b - a));
    if (err <= local_tol || (p.b - p.a) < 1e-14 * std::abs(b - a)) {
      total += fine;
      continue;
    }
    if (used + 2 > max_panels)
      throw QuadratureFailure("adaptive_integrate: error estimate stalled (panel budget)");
    const double mid = 0.5 * (p.a + p.b);
    todo.push_back({p.a, mid, panel_integral(f, p.a, mid, base_order, scratch)});
    todo.push_back({mid, p.b, panel_integral(f, mid, p.b, base_order, scratch)});
    used += 2;
  }
  return total;
}

}  // namespace wbk
