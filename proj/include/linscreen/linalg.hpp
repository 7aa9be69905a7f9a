#pragma once

#include "linscreen/model.hpp"

namespace linscreen {

/// Cholesky A = L L^T with an explicit pivot guard. Returns false when a
/// pivot falls below rel_pivot_tol times the largest diagonal entry of A,
/// leaving L unspecified. A must be symmetric.
bool try_cholesky_lower(const Matrix& a, double rel_pivot_tol, Matrix& lower);

/// Solve A X = B given the Cholesky factor of A (two triangular sweeps).
Matrix cholesky_solve(const Matrix& lower, const Matrix& rhs);

}  // namespace linscreen
