#pragma once

#include <functional>
#include <vector>

namespace wbk {

// Gauss-Legendre rule on [-1, 1]; nodes ascending, weights matching.
// Computed once per order by Newton iteration on the Legendre recurrence
// and cached.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendre& gauss_legendre(int order);

// Nodes/weights mapped to [a, b].
void gauss_legendre_on(int order, double a, double b, std::vector<double>& x,
                       std::vector<double>& w);

// Adaptive panel-bisection quadrature of f over [a, b] with absolute error
// target tol; the error estimate on each panel is |GL(p) - GL(2p)|.
// Throws QuadratureFailure when the panel budget is exhausted.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double tol, int base_order = 15, int max_panels = 20000);

}  // namespace wbk
