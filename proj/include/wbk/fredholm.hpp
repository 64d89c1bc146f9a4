#pragma once

#include <vector>

#include "wbk/kernel.hpp"
#include "wbk/linalg.hpp"

namespace wbk {

// Union of gap intervals (a_1,a_2) u ... u (a_{2l-1},a_{2l}) in the
// rescaled coordinate.  Endpoints nondecreasing, >= 0; an equal pair is a
// degenerate (empty) interval.
struct IntervalUnion {
  std::vector<double> endpoints;

  explicit IntervalUnion(std::vector<double> e);
  IntervalUnion(double a, double b) : IntervalUnion(std::vector<double>{a, b}) {}

  int pairs() const { return static_cast<int>(endpoints.size()) / 2; }
  double total_length() const;

  IntervalUnion perturbed(int k, double h) const;  // endpoint a_k (1-based) shifted by h
};

// Gauss-Legendre panel per sub-interval.  A panel whose left endpoint sits
// at (or essentially at) the origin is mapped through x = a + (b-a) t^r so
// the x^(1/m), y^(1/n) branch behaviour of the kernel at 0 turns into a
// polynomial in t and the rule converges spectrally again.
struct NystromGrid {
  std::vector<double> x, w, sw;  // nodes, weights, sqrt(weights)
  int order{0};
};

NystromGrid build_grid(const IntervalUnion& J, int order, int left_smooth = 1);

// Smallest exponent r that clears the kernel's exponent lattice at the
// origin: r * rho_f, r/m and r/n all integral (capped for exotic alpha).
int smoothing_exponent(const KernelParams& params);

// det(I - K~|_J) through the symmetrized Nystrom matrix
// delta_ij - sqrt(w_i) K~(x_i, x_j) sqrt(w_j) and LU factorization.
double fredholm_det(const ScaledKernel& K, const IntervalUnion& J, int order);

// Gap probability F(s) = det(I - K~ on (0, s^m/(m^m n^n))).
double gap_probability(const ScaledKernel& K, double s, int order = 48);

// Leading small-s law exp(-theta s^(alpha+1) / (G((a+1)/th) G(a+1) (a+1)^2)).
double small_s_asymptote(const KernelParams& params, double s);
double small_s_log_asymptote(const KernelParams& params, double s);

// Solutions of the resolvent linear systems on the quadrature nodes plus
// everything derived from them: endpoint values x_{j,k} = Q_j(a_k),
// y_{j,k} = P_j(a_k), the moment matrix w_{i,j} = int phi_i P_j, and
//   u_j = (-1)^n w_{0,j} + b_{j-1},   v_j = (-1)^n w_{j,m+n-1}.
// Endpoint entries are NaN where phi diverges at an endpoint (a_k = 0 with
// a negative leading exponent).
struct ResolventQuantities {
  IntervalUnion J;
  NystromGrid grid;
  Matrix Qn, Pn;      // (m+n) x N node values of Q_j, P_j
  Matrix x_jk, y_jk;  // (m+n) x 2l endpoint values
  Matrix w_ij;        // (m+n) x (m+n)
  std::vector<double> u, v;
  double det{1.0};

  ResolventQuantities() : J(std::vector<double>{0.0, 0.0}) {}
};

ResolventQuantities resolvent_quantities(const ScaledKernel& K, const IntervalUnion& J,
                                         int order);

// Nystrom-interpolated Q_j / P_j off the nodes.
double q_value(const ScaledKernel& K, const ResolventQuantities& rq, int j, double x);
double p_value(const ScaledKernel& K, const ResolventQuantities& rq, int j, double y);

// Resolvent kernel R(x,y) = sum_j Q_j(x) P_j(y) / (x-y); the diagonal is
// sum_j Q_j'(x) P_j(x) with Q' from a centered stencil on the interpolant.
double resolvent_kernel(const ScaledKernel& K, const ResolventQuantities& rq, double x,
                        double y);

}  // namespace wbk
