#include "wbk/linalg.hpp"

#include <cmath>

#include "wbk/errors.hpp"
#include "wbk/simd.hpp"

namespace wbk {

LuFactors lu_factor(Matrix m, double pivot_floor) {
  if (m.rows != m.cols) throw DomainError("lu_factor: matrix must be square");
  const int n = m.rows;
  LuFactors f;
  f.perm.resize(n);
  double scale = 0.0;
  for (double v : m.a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(m(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(m(i, k));
      if (v > best) { best = v; piv = i; }
    }
    if (best < pivot_floor * scale * 1e-3 || best == 0.0)
      throw SingularSystem("lu_factor: pivot underflow at column " + std::to_string(k));
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      f.sign = -f.sign;
    }
    f.perm[k] = piv;
    const double inv = 1.0 / m(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double l = m(i, k) * inv;
      m(i, k) = l;
      if (l != 0.0) simd::axpy(-l, m.row(k) + k + 1, m.row(i) + k + 1, n - k - 1);
    }
  }
  f.lu = std::move(m);
  return f;
}

double LuFactors::det() const {
  double d = sign;
  for (int i = 0; i < lu.rows; ++i) d *= lu(i, i);
  return d;
}

std::vector<double> LuFactors::solve(const std::vector<double>& b) const {
  const int n = lu.rows;
  std::vector<double> x = b;
  for (int k = 0; k < n; ++k) std::swap(x[k], x[perm[k]]);
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    s -= simd::dot(lu.row(i), x.data(), i);
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    s -= simd::dot(lu.row(i) + i + 1, x.data() + i + 1, n - i - 1);
    x[i] = s / lu(i, i);
  }
  return x;
}

std::vector<double> LuFactors::solve_transposed(const std::vector<double>& b) const {
  // A = P^T L U  =>  A^T = U^T L^T P; solve U^T z = b, L^T y = z, x = P^T y.
  const int n = lu.rows;
  std::vector<double> x = b;
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    for (int k = 0; k < i; ++k) s -= lu(k, i) * x[k];
    x[i] = s / lu(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k < n; ++k) s -= lu(k, i) * x[k];
    x[i] = s;
  }
  for (int k = n - 1; k >= 0; --k) std::swap(x[k], x[perm[k]]);
  return x;
}

}  // namespace wbk
