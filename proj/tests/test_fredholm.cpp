#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wbk/errors.hpp"
#include "wbk/fredholm.hpp"

using wbk::IntervalUnion;
using wbk::KernelParams;
using wbk::ScaledKernel;

namespace {

// det(I - K~'|_J): the transposed-kernel operator, assembled directly.
double det_transposed(const ScaledKernel& K, const IntervalUnion& J, int order) {
  const wbk::NystromGrid g =
      wbk::build_grid(J, order, wbk::smoothing_exponent(K.params()));
  const int N = static_cast<int>(g.x.size());
  wbk::Matrix B(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      B(i, j) = (i == j ? 1.0 : 0.0) - g.sw[i] * K.kernel(g.x[j], g.x[i]) * g.sw[j];
  return wbk::lu_factor(B).det();
}

}  // namespace

TEST_SUITE("fredholm") {

TEST_CASE("interval union validation") {
  CHECK_THROWS_AS(IntervalUnion(std::vector<double>{0.5}), wbk::DomainError);
  CHECK_THROWS_AS(IntervalUnion(std::vector<double>{-0.1, 0.5}), wbk::DomainError);
  CHECK_THROWS_AS(IntervalUnion(std::vector<double>{0.5, 0.2}), wbk::DomainError);
  const IntervalUnion two({0.2, 0.6, 1.0, 1.5});
  CHECK(two.pairs() == 2);
  CHECK(two.total_length() == doctest::Approx(0.9));
}

TEST_CASE("grid weights sum to the sub-interval lengths") {
  // holds exactly (to roundoff) with and without the origin smoothing map
  const IntervalUnion J({0.0, 0.7, 1.2, 1.5});
  for (int r : {1, 2, 6}) {
    const wbk::NystromGrid g = wbk::build_grid(J, 24, r);
    double w_first = 0.0, w_second = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      CHECK(g.x[i] > ((g.x[i] < 0.7) ? 0.0 : 1.2));  // nodes interior
      CHECK(g.x[i] < ((g.x[i] < 0.7) ? 0.7 : 1.5));
      (g.x[i] < 0.7 ? w_first : w_second) += g.w[i];
    }
    CHECK(w_first == doctest::Approx(0.7).epsilon(1e-13));
    CHECK(w_second == doctest::Approx(0.3).epsilon(1e-13));
  }
}

TEST_CASE("degenerate interval gives determinant one") {
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));
  CHECK(wbk::fredholm_det(K, IntervalUnion(0.7, 0.7), 16) == 1.0);
}

TEST_CASE("determinant decreases in s and stays in (0,1]") {
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));  // theta = 2
  double prev = 1.0;
  for (double s : {0.5, 1.0, 2.0}) {
    const double f = wbk::gap_probability(K, s, 32);
    CHECK(f > 0.0);
    CHECK(f < prev);
    prev = f;
  }
}

TEST_CASE("spectral self-convergence in the quadrature order") {
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));
  const IntervalUnion J(0.0, K.params().scale_to_tilde(1.0));
  const double d16 = wbk::fredholm_det(K, J, 16);
  const double d32 = wbk::fredholm_det(K, J, 32);
  const double d64 = wbk::fredholm_det(K, J, 64);
  CHECK(std::abs(d16 - d32) < 1e-10);
  // successive changes keep shrinking until the floating-point floor
  CHECK(std::abs(d32 - d64) < std::max(std::abs(d16 - d32), 1e-14));
}

TEST_CASE("determinant decreases under set inclusion of the gap region") {
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));
  const double d1 = wbk::fredholm_det(K, IntervalUnion(0.2, 0.6), 24);
  const double d2 = wbk::fredholm_det(K, IntervalUnion({0.2, 0.6, 1.0, 1.5}), 24);
  const double d3 = wbk::fredholm_det(K, IntervalUnion({0.1, 0.7, 0.9, 1.6}), 24);
  CHECK(d1 > d2);
  CHECK(d2 > d3);
  CHECK(d3 > 0.0);
  CHECK(d1 < 1.0);
}

TEST_CASE("gap probability tends to one as s -> 0") {
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));
  CHECK(wbk::gap_probability(K, 0.0, 16) == 1.0);
  CHECK(wbk::gap_probability(K, 1e-3, 16) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("transpose invariance of the determinant") {
  for (auto [alpha, m, n] : {std::tuple{1.0, 2, 1}, {2.0, 3, 2}}) {
    const ScaledKernel K(KernelParams::make(alpha, m, n));
    const IntervalUnion J(0.2, 1.1);
    const double d = wbk::fredholm_det(K, J, 32);
    const double dt = det_transposed(K, J, 32);
    CHECK(std::abs(d - dt) < 1e-10);
  }
}

TEST_CASE("small-s asymptote closed forms") {
  // theta=2, alpha=1: log asymptote = -s^2/2
  const KernelParams p21 = KernelParams::make(1.0, 2, 1);
  CHECK(wbk::small_s_log_asymptote(p21, 0.3) == doctest::Approx(-0.045).epsilon(1e-14));
  // theta=1, alpha=0: log asymptote = -s
  const KernelParams p11 = KernelParams::make(0.0, 1, 1);
  CHECK(wbk::small_s_log_asymptote(p11, 0.3) == doctest::Approx(-0.3).epsilon(1e-14));
}

TEST_CASE("small-s law is approached by the determinant") {
  // alpha=0, theta=1 is exact: F(s) = exp(-s)
  const ScaledKernel K0(KernelParams::make(0.0, 1, 1));
  for (double s : {0.05, 0.5, 1.0})
    CHECK(wbk::gap_probability(K0, s, 32) == doctest::Approx(std::exp(-s)).epsilon(1e-12));
  // alpha=1, theta=2: ratio approaches 1 from below, deficit ~ 0.49 s
  const ScaledKernel K2(KernelParams::make(1.0, 2, 1));
  double prev_deficit = 1.0;
  for (double s : {0.1, 0.05, 0.02}) {
    const double ratio =
        std::log(wbk::gap_probability(K2, s, 32)) / wbk::small_s_log_asymptote(K2.params(), s);
    const double deficit = std::abs(1.0 - ratio);
    CHECK(deficit < prev_deficit);
    CHECK(deficit < 1.2 * 0.49 * s);
    prev_deficit = deficit;
  }
}

TEST_CASE("resolvent quantities at a tiny interval approach (b, 0) linearly") {
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));
  // deviation constant is fT(0) gT(0) = 2 for this parameter set
  for (double eps : {1e-6, 1e-7}) {
    const wbk::ResolventQuantities rq =
        wbk::resolvent_quantities(K, IntervalUnion(0.0, eps), 16);
    const auto& b = K.coeffs();
    CHECK(std::abs(rq.u[0] - 0.0) < 3.0 * eps);
    CHECK(std::abs(rq.u[1] - 0.0) < 3.0 * eps);
    CHECK(std::abs(rq.u[2] - 0.5) < 3.0 * eps);
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(rq.u[j] - b.b_prev(j)) < 3.0 * eps);
      CHECK(std::abs(rq.v[j]) < 3.0 * eps);
    }
  }
}

TEST_CASE("resolvent kernel reduces to the kernel on small intervals") {
  // R = K~ + O(|J|): first-order bound at |J| = 1e-3, and the linear
  // scaling of the remainder under |J| -> |J|/10
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));
  const wbk::ResolventQuantities rq =
      wbk::resolvent_quantities(K, IntervalUnion(2.0, 2.0 + 1e-3), 16);
  const wbk::ResolventQuantities rq_small =
      wbk::resolvent_quantities(K, IntervalUnion(2.0, 2.0 + 1e-4), 16);
  for (auto [x, y] : {std::pair{2.0002, 2.0008}, {2.0001, 2.0004}}) {
    const double d1 = std::abs(wbk::resolvent_kernel(K, rq, x, y) - K.kernel(x, y));
    CHECK(d1 < 1e-4);
    const double d2 = std::abs(wbk::resolvent_kernel(K, rq_small, x, y) - K.kernel(x, y));
    CHECK(d2 < 0.2 * d1);
  }
}

TEST_CASE("resolvent kernel matches a truncated Neumann sum") {
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));
  const IntervalUnion J(0.4, 0.408);
  const wbk::ResolventQuantities rq = wbk::resolvent_quantities(K, J, 24);
  const auto& g = rq.grid;
  const int N = static_cast<int>(g.x.size());
  // R ~ K + K^2 + K^3 on the quadrature grid
  auto iterated = [&](double x, double y) {
    double k2 = 0.0, k3 = 0.0;
    for (int l = 0; l < N; ++l) {
      k2 += g.w[l] * K.kernel(x, g.x[l]) * K.kernel(g.x[l], y);
      for (int r = 0; r < N; ++r)
        k3 += g.w[l] * g.w[r] * K.kernel(x, g.x[l]) * K.kernel(g.x[l], g.x[r]) *
              K.kernel(g.x[r], y);
    }
    return K.kernel(x, y) + k2 + k3;
  };
  for (auto [x, y] : {std::pair{0.402, 0.407}, {0.406, 0.401}})
    CHECK(std::abs(wbk::resolvent_kernel(K, rq, x, y) - iterated(x, y)) < 1e-6);
}

TEST_CASE("diagonal resolvent is positive at the right endpoint") {
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));
  const wbk::ResolventQuantities rq = wbk::resolvent_quantities(K, IntervalUnion(0.0, 1.0), 48);
  CHECK(wbk::resolvent_kernel(K, rq, 1.0, 1.0) > 0.0);
}

TEST_CASE("endpoint log-derivative of the determinant matches the resolvent diagonal") {
  const ScaledKernel K(KernelParams::make(1.0, 2, 1));
  const IntervalUnion J({0.2, 0.6, 1.0, 1.5});
  const wbk::ResolventQuantities rq = wbk::resolvent_quantities(K, J, 32);
  const double h = 1e-5;
  for (int k = 1; k <= 4; ++k) {
    const double a_k = J.endpoints[k - 1];
    const double fd = (std::log(wbk::fredholm_det(K, J.perturbed(k, h), 32)) -
                       std::log(wbk::fredholm_det(K, J.perturbed(k, -h), 32))) /
                      (2.0 * h);
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^(k+1)
    const double rr = sign * wbk::resolvent_kernel(K, rq, a_k, a_k);
    CHECK(std::abs(a_k * fd - a_k * rr) < 1e-5);
  }
}

TEST_CASE("divergent endpoint values are reported unavailable") {
  // (alpha+1)/m < 1: phi diverges at the origin, so the a_1 = 0 endpoint
  // values come back NaN while everything else stays finite
  const ScaledKernel K(KernelParams::make(0.5, 2, 1));
  const wbk::ResolventQuantities rq = wbk::resolvent_quantities(K, IntervalUnion(0.0, 0.5), 24);
  CHECK(std::isnan(rq.x_jk(0, 0)));
  for (int j = 0; j < 3; ++j) {
    CHECK(std::isfinite(rq.x_jk(j, 1)));
    CHECK(std::isfinite(rq.y_jk(j, 1)));
    CHECK(std::isfinite(rq.u[j]));
    CHECK(std::isfinite(rq.v[j]));
  }
  CHECK(rq.det > 0.0);
  CHECK(rq.det < 1.0);
}

TEST_CASE("determinant equals the resolvent solve byproduct") {
  const ScaledKernel K(KernelParams::make(2.0, 3, 2));
  const IntervalUnion J(0.1, 0.9);
  const wbk::ResolventQuantities rq = wbk::resolvent_quantities(K, J, 24);
  CHECK(rq.det == doctest::Approx(wbk::fredholm_det(K, J, 24)).epsilon(1e-12));
}

}  // TEST_SUITE
