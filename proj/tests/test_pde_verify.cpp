#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wbk/errors.hpp"
#include "wbk/ode_gap.hpp"
#include "wbk/pde_verify.hpp"

using wbk::CanonicalCoords;
using wbk::IntervalUnion;
using wbk::KernelParams;
using wbk::Poly;
using wbk::ScaledKernel;
using wbk::VarKind;

namespace {

Poly random_poly(oracle::Rng& rng, int p, int two_l) {
  Poly f;
  for (int t = 0; t < 5; ++t) {
    const int kind = static_cast<int>(rng.uniform(0.0, 4.0));
    const int j = static_cast<int>(rng.uniform(0.0, p));
    const int k = 1 + static_cast<int>(rng.uniform(0.0, two_l));
    Poly v = Poly::var(wbk::var_id(static_cast<VarKind>(kind), j,
                                   kind <= 1 ? k : 0));
    const int j2 = static_cast<int>(rng.uniform(0.0, p));
    Poly w = Poly::var(wbk::var_id(VarKind::U, j2));
    f += v * w * rng.uniform(-1.0, 1.0);
    f += v * rng.uniform(-1.0, 1.0);
  }
  return f;
}

bool poly_equal(const Poly& a, const Poly& b, double tol = 1e-12) {
  Poly d = a;
  d -= b;
  return d.is_zero(tol);
}

}  // namespace

TEST_SUITE("pde_verify") {

TEST_CASE("poisson bracket axioms") {
  oracle::Rng rng(99);
  const std::vector<double> a{0.3, 0.8, 1.2, 1.9};
  const int p = 3, n = 1;
  for (int trial = 0; trial < 5; ++trial) {
    const Poly f = random_poly(rng, p, 4);
    const Poly g = random_poly(rng, p, 4);
    const Poly h = random_poly(rng, p, 4);
    // antisymmetry
    Poly anti = wbk::poisson_bracket(f, g, a, p, n);
    anti += wbk::poisson_bracket(g, f, a, p, n);
    CHECK(anti.is_zero(1e-14));
    // Leibniz rule {fg, h} = f{g,h} + g{f,h}
    const Poly lhs = wbk::poisson_bracket(f * g, h, a, p, n);
    Poly rhs = f * wbk::poisson_bracket(g, h, a, p, n);
    rhs += g * wbk::poisson_bracket(f, h, a, p, n);
    CHECK(poly_equal(lhs, rhs, 1e-12));
  }
}

TEST_CASE("canonical relations") {
  const std::vector<double> a{0.3, 0.8};
  const int p = 3;
  for (int n : {1, 2}) {
    const double sn = (n % 2 == 0) ? 1.0 : -1.0;
    for (int j = 0; j < p; ++j)
      for (int k = 1; k <= 2; ++k)
        for (int i = 0; i < p; ++i)
          for (int l = 1; l <= 2; ++l) {
            const Poly br = wbk::poisson_bracket(Poly::var(wbk::var_id(VarKind::Q, j, k)),
                                                 Poly::var(wbk::var_id(VarKind::P, i, l)), a, p, n);
            const double want = (j == i && k == l) ? 1.0 / a[k - 1] : 0.0;
            Poly expect = Poly::constant(want);
            CHECK(poly_equal(br, expect));
            // {q,q} = {p,p} = 0
            CHECK(wbk::poisson_bracket(Poly::var(wbk::var_id(VarKind::Q, j, k)),
                                       Poly::var(wbk::var_id(VarKind::Q, i, l)), a, p, n)
                      .is_zero());
          }
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        const Poly br = wbk::poisson_bracket(Poly::var(wbk::var_id(VarKind::U, i)),
                                             Poly::var(wbk::var_id(VarKind::V, j)), a, p, n);
        CHECK(poly_equal(br, Poly::constant(i == j ? sn : 0.0)));
      }
  }
}

TEST_CASE("hamiltonian vanishes at zero coordinates") {
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));
  CanonicalCoords c;
  c.q = wbk::Matrix(3, 4);
  c.p = wbk::Matrix(3, 4);
  c.u = {0.4, -0.2, 0.9};
  c.v = {0.1, 0.0, -0.3};
  c.a = {0.2, 0.6, 1.0, 1.5};
  for (int k = 1; k <= 4; ++k) CHECK(wbk::hamiltonian(K, c, k) == 0.0);
}

TEST_CASE("bracket of a hamiltonian with itself is identically zero") {
  const std::vector<double> a{0.2, 0.6, 1.0, 1.5};
  const Poly h2 = wbk::hamiltonian_poly(a, 2, 3, 1);
  CHECK(wbk::poisson_bracket(h2, h2, a, 3, 1).is_zero());
}

TEST_CASE("hamiltonians match endpoint log-derivatives of the determinant") {
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));
  const IntervalUnion J({0.2, 0.6, 1.0, 1.5});
  const wbk::ResolventQuantities rq = wbk::resolvent_quantities(K, J, 24);
  const CanonicalCoords coords = wbk::canonical_coords(rq);
  const double h = 1e-5;
  for (int k = 1; k <= 4; ++k) {
    const double hk = wbk::hamiltonian(K, coords, k);
    const double fd = J.endpoints[k - 1] *
                      (std::log(wbk::fredholm_det(K, J.perturbed(k, h), 24)) -
                       std::log(wbk::fredholm_det(K, J.perturbed(k, -h), 24))) /
                      (2.0 * h);
    CHECK(std::abs(hk - fd) < 1e-5);
    // signed identity against the resolvent diagonal
    const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^(k+1)
    const double akr = J.endpoints[k - 1] *
                       wbk::resolvent_kernel(K, rq, J.endpoints[k - 1], J.endpoints[k - 1]);
    CHECK(std::abs(hk - sign * akr) < 1e-6);
  }
}

TEST_CASE("hamiltonians are in involution at solved coordinates") {
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));
  const IntervalUnion J({0.2, 0.6, 1.0, 1.5});
  const wbk::ResolventQuantities rq = wbk::resolvent_quantities(K, J, 24);
  const CanonicalCoords coords = wbk::canonical_coords(rq);
  double scale = 1.0;
  for (int k = 1; k <= 4; ++k) scale = std::max(scale, std::abs(wbk::hamiltonian(K, coords, k)));
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j)
      CHECK(std::abs(wbk::involution_check(K, coords, i, j)) < 1e-8 * scale);
}

TEST_CASE("hamilton equations reproduce endpoint derivatives at order h^2") {
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));
  const IntervalUnion J({0.2, 0.6, 1.0, 1.5});
  const double r1 = wbk::hamilton_equations_residual(K, J, 24, 1e-4);
  const double r2 = wbk::hamilton_equations_residual(K, J, 24, 5e-5);
  CHECK(r1 < 1e-5);
  const double order = std::log2(r1 / r2);
  CHECK(order > 1.5);
  CHECK(order < 2.5);
}

TEST_CASE("pde residual families on a two-interval configuration") {
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));
  const IntervalUnion J({0.2, 0.6, 1.0, 1.5});
  const wbk::PdeResidualReport rep = wbk::pde_residuals(K, J, 24, 1e-4);
  REQUIRE(rep.families.size() == 9);
  for (const auto& f : rep.families) CHECK(f.residual < 1e-5);
  const wbk::PdeResidualReport rep2 = wbk::pde_residuals(K, J, 24, 5e-5);
  const double decay = rep2.max_residual() / rep.max_residual();
  CHECK(decay < 0.4);  // order-2 in h: expect ~0.25
  CHECK(rep.family("du").residual < 1e-5);
  CHECK_THROWS_AS(rep.family("nope"), wbk::DomainError);
}

TEST_CASE("verification battery across parities and system sizes") {
  // even n flips the u,v block of the bracket; (2,3,2) runs the
  // five-component system
  for (auto [alpha, m, n] : {std::tuple{1.0, 1, 2}, {2.0, 3, 2}}) {
    const ScaledKernel K(KernelParams::make(alpha, m, n));
    const IntervalUnion J({0.2, 0.6, 1.0, 1.5});
    const wbk::PdeResidualReport rep = wbk::pde_residuals(K, J, 20, 1e-4);
    CHECK(rep.max_residual() < 1e-5);
    const wbk::ResolventQuantities rq = wbk::resolvent_quantities(K, J, 20);
    const CanonicalCoords coords = wbk::canonical_coords(rq);
    const double h = 1e-5;
    for (int k = 1; k <= 4; ++k) {
      const double hk = wbk::hamiltonian(K, coords, k);
      const double fd = J.endpoints[k - 1] *
                        (std::log(wbk::fredholm_det(K, J.perturbed(k, h), 20)) -
                         std::log(wbk::fredholm_det(K, J.perturbed(k, -h), 20))) /
                        (2.0 * h);
      CHECK(std::abs(hk - fd) < 1e-5);
    }
    for (int i = 1; i <= 4; ++i)
      for (int j = i + 1; j <= 4; ++j)
        CHECK(std::abs(wbk::involution_check(K, coords, i, j)) < 1e-10);
    CHECK(wbk::hamilton_equations_residual(K, J, 20, 1e-4) < 1e-5);
  }
}

TEST_CASE("single-interval system reduces to the gap ODE right-hand side") {
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));
  const double s = 0.5, h = 1e-4;
  auto grab = [&](double send) {
    return wbk::resolvent_quantities(K, IntervalUnion(0.0, send), 32);
  };
  const wbk::ResolventQuantities mid = grab(s);
  const wbk::ResolventQuantities up = grab(s + h);
  const wbk::ResolventQuantities dn = grab(s - h);

  wbk::GapState st;
  st.s = s;
  st.x.resize(3);
  st.y.resize(3);
  for (int j = 0; j < 3; ++j) {
    st.x[j] = mid.x_jk(j, 1);
    st.y[j] = mid.y_jk(j, 1);
  }
  st.u = mid.u;
  st.v = mid.v;
  const wbk::GapState d = wbk::GapOdeSolver(K).rhs(st);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs((up.x_jk(j, 1) - dn.x_jk(j, 1)) / (2 * h) - d.x[j]) < 1e-5);
    CHECK(std::abs((up.u[j] - dn.u[j]) / (2 * h) - d.u[j]) < 1e-5);
    CHECK(std::abs((up.v[j] - dn.v[j]) / (2 * h) - d.v[j]) < 1e-5);
  }
}

}  // TEST_SUITE
