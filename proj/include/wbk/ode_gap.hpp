#pragma once

#include <vector>

#include "wbk/kernel.hpp"

namespace wbk {

// State of the 4(m+n)-dimensional nonlinear system whose solution carries
// the gap probability over a single interval (0, s) in the rescaled
// coordinate: x_j(s), y_j(s) continue phi_j, psi_j through the resolvent,
// u_j, v_j are the moment integrals.
struct GapState {
  double s{0.0};
  std::vector<double> x, y, u, v;
};

// Result of evaluating both closed forms of the gap probability.
struct GapOdeResult {
  double F;             // exp(int v_0(t)/t dt), the returned value
  double F_log_weight;  // the log-weighted x_0 y_{m+n-1} form (diagnostic)
  double discrepancy;   // |F - F_log_weight|
};

class GapOdeSolver {
 public:
  explicit GapOdeSolver(const ScaledKernel& K);

  const ScaledKernel& kernel() const { return *K_; }

  // d/ds of the state per the coupled system
  //   s x_j' = -v_j x_0 - x_{j+1}                         (j <= m+n-2)
  //   s x_{m+n-1}' = ((-1)^(n+1) s - v_{m+n-1}) x_0 + sum_i u_i x_i
  //   s y_j' = y_{j-1} - u_j y_{m+n-1}                    (j >= 1)
  //   s y_0' = sum_i v_i y_i + ((-1)^n s - u_0) y_{m+n-1}
  //   u_j' = (-1)^n x_0 y_j
  //   v_j' = (-1)^n x_j y_{m+n-1}
  GapState rhs(const GapState& state) const;

  // Leading-order data at a small s0: x_j = phi_j(s0), y_j = psi_j(s0),
  // u_j = b_{j-1}, v_j = 0.
  GapState init_state(double s0) const;

  // Largest start point with the second phi_0 series term below 1e-8 of
  // the first (clamped to a representable range).
  double default_s0() const;

  // Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) in sigma = ln s;
  // the log substitution removes the 1/s factor of every x, y equation.
  // Returns the accepted steps from s0 to s1.
  std::vector<GapState> integrate(double s0, double s1, double tol) const;

  // F(s) for the original process; s is mapped to the rescaled endpoint
  // s^m/(m^m n^n) internally.  Evaluates both closed forms; the integrals
  // below the series-controlled start point are summed termwise.
  GapOdeResult gap(double s, double tol = 1e-10) const;

 private:
  struct Quad {          // running integrals carried alongside the state
    double iv{0.0};      // int v_0 dsigma
    double jlog{0.0};    // int sigma x_0 y_{p-1} e^sigma dsigma
  };
  void rhs_sigma(double sigma, const std::vector<double>& packed, std::vector<double>& out) const;
  std::vector<GapState> integrate_impl(double s0, double s1, double tol, Quad* quad) const;

  const ScaledKernel* K_;
  int p_;
  int npar_;  // (-1)^n
};

double gap_via_ode(const ScaledKernel& K, double s, double tol = 1e-10);

}  // namespace wbk
