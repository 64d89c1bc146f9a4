#pragma once

#include <vector>

#include "wbk/frobenius.hpp"
#include "wbk/rational.hpp"

namespace wbk {

// Parameters of the hard-edge kernel K^(alpha,theta) with rational
// theta = m/n in lowest terms.
struct KernelParams {
  Rational alpha;
  int m{1};
  int n{1};

  KernelParams(Rational a, int m_, int n_);
  static KernelParams make(double alpha, int m, int n);

  int p() const { return m + n; }                    // system size m+n
  double theta() const { return static_cast<double>(m) / n; }
  Rational theta_rat() const { return Rational(m, n); }

  // alpha > -1: series/integral representations are defined.
  bool series_valid() const { return alpha > Rational(-1); }
  // alpha > m - 1 - m/n: the integrable (IIKS) machinery applies.
  bool integrable_valid() const {
    return alpha > Rational(m - 1) - Rational(m, n);
  }
  void require_integrable() const;

  // Interval map between user coordinates and the rescaled operator:
  // an endpoint s of the original process corresponds to s^m / (m^m n^n).
  double scale_to_tilde(double s) const;
  double scale_from_tilde(double t) const;
};

// Exponents nu_0..nu_{m+n-1} and the expansion coefficients b_0..b_{m+n-1}
// of prod_{i>=1}(x - nu_i); b is defined by that product expansion.
struct ConcomitantCoeffs {
  std::vector<Rational> nu;       // size m+n, nu[0] = 0
  std::vector<Rational> b_exact;  // size m+n, b_exact[m+n-1] = 1
  std::vector<double> b;          // b_exact as doubles

  // b_{j-1} with the convention b_{-1} = 0.
  double b_prev(int j) const { return j == 0 ? 0.0 : b[j - 1]; }
};

std::vector<Rational> nu_vector(const KernelParams& params);
ConcomitantCoeffs b_coeffs(const std::vector<Rational>& nu);

// --- representations of K^(alpha,theta) -----------------------------------

// Double-series representation; absolute error <= tol.  x = 0 allowed for
// alpha >= 0, y >= 0 always.
double kernel_series(const KernelParams& params, double x, double y, double tol = 1e-12);

// Quadrature representation
//   theta x^alpha int_0^1 J_{(a+1)/th,1/th}(ux) J_{a+1,th}((uy)^th) u^alpha du
// with the u^alpha endpoint singularity absorbed by substitution when
// alpha < 0.
double kernel_integral(const KernelParams& params, double x, double y, double tol = 1e-10);

// Integrable (IIKS) representation built from the bilinear concomitant of
// the two Wright-Bessel sides.  Valid off the diagonal; construction caches
// all Delta-powers, so keep one instance per parameter set.
class IntegrableKernel {
 public:
  IntegrableKernel(const KernelParams& params, double x_max = 12.0);

  const KernelParams& params() const { return params_; }
  const ConcomitantCoeffs& coeffs() const { return coeffs_; }

  // B(f_side(x), g_side(y)) where f_side = x^(alpha+1-m) J_{(a+1)n/m, n/m}
  // and g_side = J_{a+1, m/n}(y^(m/n)).
  double concomitant(double x, double y) const;
  // Same with both arguments scaled by t^(1/m); decays as t -> 0+.
  double concomitant_scaled(double t, double x, double y) const;

  // m^m n^(n-1) x^(m-1) B(...)/(x^m - y^m).  Throws NearDiagonal when
  // |x^m - y^m| < eps_diag * max(1, x^m); callers fall back to
  // kernel_series / kernel_integral there.
  double eval(double x, double y) const;

  double diagonal_guard() const { return eps_diag_; }

  // test hook: flips the sign of every b coefficient (fault injection for
  // the verification CLI)
  void inject_b_sign_flip();

 private:
  KernelParams params_;
  ConcomitantCoeffs coeffs_;
  std::vector<FrobeniusSeries> df_;  // Delta^j of the f side, j = 0..m+n-1
  std::vector<FrobeniusSeries> dg_;  // Delta^i of the g side
  double eps_diag_{1e-6};
};

// --- rescaled kernel and the phi/psi families ------------------------------

// Everything attached to the rescaled operator K~ of a parameter set:
// the two generating functions fT, gT (Frobenius series), the families
//   phi_i = (-1)^(n+1-i) Delta^i fT,   psi_i = sum_j b_{i+j} Delta^j gT,
// and the kernel K~(x,y) = sum_i phi_i(x) psi_i(y) / (x - y), with an
// automatic switch to the series route near the diagonal.
class ScaledKernel {
 public:
  ScaledKernel(const KernelParams& params, double x_max = 8.0);

  const KernelParams& params() const { return params_; }
  const ConcomitantCoeffs& coeffs() const { return coeffs_; }
  double x_max() const { return x_max_; }

  double phi(int i, double x) const;
  double psi(int i, double y) const;
  const FrobeniusSeries& phi_series(int i) const;
  const FrobeniusSeries& psi_series(int i) const;
  const FrobeniusSeries& f_series() const { return f_tilde_; }
  const FrobeniusSeries& g_series() const { return g_tilde_; }

  // K~(x, y): IIKS sum off the diagonal, rescaled double series near it.
  double kernel(double x, double y) const;
  // the two routes individually (cross-checks)
  double kernel_iiks(double x, double y) const;
  double kernel_scaled_series(double x, double y, double tol = 1e-12) const;

  // test hook, as IntegrableKernel::inject_b_sign_flip
  void inject_b_sign_flip();

 private:
  KernelParams params_;
  ConcomitantCoeffs coeffs_;
  FrobeniusSeries f_tilde_, g_tilde_;
  std::vector<FrobeniusSeries> phi_, psi_;
  double x_max_;
  double eps_diag_{1e-6};
};

}  // namespace wbk
