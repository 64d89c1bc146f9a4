#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "wbk/linalg.hpp"

namespace wbk {

// Sparse multivariate polynomials over the canonical coordinates
// (q_{j,k}, p_{j,k}, u_j, v_j).  Small enough systems that an ordered map
// of monomials is plenty; coefficients may absorb the (numeric) endpoint
// values a_k.

enum class VarKind : std::uint32_t { Q = 0, P = 1, U = 2, V = 3 };

// k is the 1-based endpoint index (0 for u/v); j the component index.
constexpr std::uint32_t var_id(VarKind kind, int j, int k = 0) {
  return (static_cast<std::uint32_t>(kind) << 16) | (static_cast<std::uint32_t>(k) << 8) |
         static_cast<std::uint32_t>(j);
}
constexpr VarKind var_kind(std::uint32_t id) { return static_cast<VarKind>(id >> 16); }
constexpr int var_k(std::uint32_t id) { return static_cast<int>((id >> 8) & 0xff); }
constexpr int var_j(std::uint32_t id) { return static_cast<int>(id & 0xff); }

// sorted (variable, exponent) pairs
using Monomial = std::vector<std::pair<std::uint32_t, int>>;

struct Poly {
  std::map<Monomial, double> terms;

  static Poly constant(double c);
  static Poly var(std::uint32_t id);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(double c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, double c) { return a *= c; }
  friend Poly operator*(const Poly& a, const Poly& b);

  Poly partial(std::uint32_t id) const;
  bool is_zero(double tol = 0.0) const;
  double max_abs_coeff() const;
};

// Realized evaluation: q_{j,k} and p_{j,k} are substituted by the real
// endpoint data x_{j,k}, y_{j,k}; each q/p factor at an even endpoint
// contributes one factor of -i, tracked as a quadrant.  The value of the
// polynomial at the true (partly imaginary) coordinates is
//   sums[0] - i sums[1] - sums[2] + i sums[3].
struct PhasedValue {
  std::array<double, 4> sums{0.0, 0.0, 0.0, 0.0};
  double real_part() const { return sums[0] - sums[2]; }
  double minus_i_part() const { return sums[1] - sums[3]; }
  double odd_magnitude() const;   // size of the imaginary quadrants
  double even_magnitude() const;  // size of the real quadrants
};

// Real endpoint data of a solved configuration.
struct CanonicalCoords {
  Matrix q, p;            // (m+n) x 2l  (x_{j,k}, y_{j,k} values)
  std::vector<double> u, v;
  std::vector<double> a;  // endpoints a_1..a_{2l}
};

PhasedValue eval_phased(const Poly& f, const CanonicalCoords& c);

// Poisson bracket
//   {f,g} = sum_k (1/a_k) sum_j (f_q g_p - f_p g_q)
//         + (-1)^n sum_j (f_u g_v - f_v g_u)
// over j = 0..p-1 and the endpoints k = 1..2l.
Poly poisson_bracket(const Poly& f, const Poly& g, const std::vector<double>& a, int p,
                     int n_parity);

// The explicit Hamiltonian polynomial attached to endpoint k (1-based).
Poly hamiltonian_poly(const std::vector<double>& a, int k, int p, int n_parity);

}  // namespace wbk
