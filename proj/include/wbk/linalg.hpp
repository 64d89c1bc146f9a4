#pragma once

#include <vector>

namespace wbk {

// Row-major dense matrix, just big enough for Nystrom systems.
struct Matrix {
  int rows{0}, cols{0};
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
  double* row(int i) { return a.data() + static_cast<std::size_t>(i) * cols; }
  const double* row(int i) const { return a.data() + static_cast<std::size_t>(i) * cols; }
};

// In-place LU with partial pivoting. Throws SingularSystem when a pivot
// collapses below pivot_floor * (matrix scale).
struct LuFactors {
  Matrix lu;
  std::vector<int> perm;
  int sign{1};

  double det() const;
  // Solve A x = b, resp. A^T x = b, for the factored A.
  std::vector<double> solve(const std::vector<double>& b) const;
  std::vector<double> solve_transposed(const std::vector<double>& b) const;
};

LuFactors lu_factor(Matrix m, double pivot_floor = 1e-13);

}  // namespace wbk
