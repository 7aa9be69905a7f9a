#pragma once

#include <string>

#include "linscreen/model.hpp"
#include "linscreen/rng.hpp"

namespace linscreen {

enum class CovarianceKind { Identity, Equicorrelated, Ar1, Custom };

struct CovarianceSpec {
  CovarianceKind kind = CovarianceKind::Identity;
  int p = 1;
  double r = 0.0;  // correlation parameter for Equicorrelated / Ar1
  Matrix custom;   // unit-diagonal expected; renormalized otherwise

  static CovarianceSpec identity(int p);
  static CovarianceSpec equicorrelated(int p, double r);
  static CovarianceSpec ar1(int p, double r);
  static CovarianceSpec custom_matrix(Matrix sigma);
};

/// Materialized covariance: Sigma, its lower Cholesky factor and the
/// condition number from the extreme eigenvalues. Every valid Sigma keeps a
/// unit diagonal; custom inputs are renormalized when theirs drifts beyond
/// 1e-8 (flagged so callers can warn).
struct CovarianceModel {
  CovarianceSpec spec;
  Matrix sigma;
  Matrix chol;  // lower triangular, chol * chol^T = sigma
  double kappa = 1.0;
  double lambda_min = 1.0;
  double lambda_max = 1.0;
  bool renormalized = false;
};

/// Throws NotPositiveDefinite when a Cholesky pivot falls below 1e-12.
CovarianceModel materialize(const CovarianceSpec& spec);

/// Rows i.i.d. N(0, Sigma) via Z * L^T with Z filled row-major from the
/// stream. Deterministic in (model, n, seed).
DesignMatrix sample_design(const CovarianceModel& model, int n, const SeedPath& seed);

/// Support drawn uniformly without replacement, magnitudes uniform on
/// [tau, rho*tau], signs uniform. Draw order: support, then per sorted
/// support index one magnitude and one sign. The result always satisfies
/// membership(beta, s, rho, tau).
SparseCoefficients sample_beta(int p, int s, double tau, double rho, const SeedPath& seed);

/// i.i.d. N(0, sigma^2); sigma = 0 yields the zero vector.
Vector sample_noise(int n, double sigma, const SeedPath& seed);

std::string covariance_kind_name(CovarianceKind kind);

}  // namespace linscreen
