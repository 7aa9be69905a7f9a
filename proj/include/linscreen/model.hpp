#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "linscreen/errors.hpp"

namespace linscreen {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// n x p design matrix; rows are observations, columns are predictors.
/// Entries must be finite. Immutable after construction.
class DesignMatrix {
 public:
  explicit DesignMatrix(Matrix values);

  int n() const { return static_cast<int>(values_.rows()); }
  int p() const { return static_cast<int>(values_.cols()); }
  const Matrix& values() const { return values_; }

  /// FNV-1a over dimensions and entry bytes; used to tie ancillary matrices
  /// to the design they were built from.
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  Matrix values_;
  std::uint64_t fingerprint_;
};

/// Support-indexed coefficient vector. Indices are 1-based and sorted,
/// support values are nonzero. Immutable after construction.
class SparseCoefficients {
 public:
  SparseCoefficients(int p, std::vector<int> support, std::vector<double> values);

  int p() const { return p_; }
  int s() const { return static_cast<int>(support_.size()); }
  const std::vector<int>& support() const { return support_; }
  const std::vector<double>& values() const { return values_; }

  /// max|b_i| / min|b_i| over the support; 1 for an empty support.
  double rho() const;
  /// min|b_i| over the support; +inf for an empty support.
  double tau() const;

  Vector dense() const;

 private:
  int p_;
  std::vector<int> support_;
  std::vector<double> values_;
};

struct NoiseSpec {
  double sigma = 0.0;  // sigma == 0 is the noiseless regime
  explicit NoiseSpec(double sd) : sigma(sd) {
    if (!(sigma >= 0.0)) throw BadParams("noise standard deviation must be >= 0");
  }
};

struct RegressionInstance {
  DesignMatrix design;
  SparseCoefficients beta;
  Vector noise;
  Vector response;  // design * beta + noise, fixed accumulation order
};

/// Center each column to mean 0 and scale to sample variance 1 under the 1/n
/// divisor, so the standardized design satisfies diag(X^T X / n) = 1.
/// Throws ConstantColumn for zero-variance columns. Input is not modified.
DesignMatrix standardize(const DesignMatrix& design);

/// Response = X*beta + eps, accumulated left to right over support indices so
/// recomputation reproduces the stored response bit for bit.
RegressionInstance assemble(const DesignMatrix& design, const SparseCoefficients& beta,
                            const Vector& noise);

/// Membership in the coefficient class with sparsity bound s, magnitude ratio
/// bound rho and minimum signal tau. Empty support is vacuously inside.
bool membership(const SparseCoefficients& beta, int s, double rho, double tau);

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace linscreen
