#include "linscreen/linalg.hpp"

#include <cmath>

namespace linscreen {

bool try_cholesky_lower(const Matrix& a, double rel_pivot_tol, Matrix& lower) {
  const int n = static_cast<int>(a.rows());
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  if (!(max_diag > 0.0)) return false;
  const double threshold = rel_pivot_tol * max_diag;

  lower = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= lower(j, k) * lower(j, k);
    if (d < threshold) return false;
    const double ljj = std::sqrt(d);
    lower(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (int k = 0; k < j; ++k) v -= lower(i, k) * lower(j, k);
      lower(i, j) = v / ljj;
    }
  }
  return true;
}

Matrix cholesky_solve(const Matrix& lower, const Matrix& rhs) {
  Matrix y = lower.triangularView<Eigen::Lower>().solve(rhs);
  return lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

}  // namespace linscreen
