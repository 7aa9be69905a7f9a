#include "linscreen/random_design.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "linscreen/linalg.hpp"

namespace linscreen {

namespace {
constexpr double kPivotTol = 1e-12;
}

CovarianceSpec CovarianceSpec::identity(int p) { return CovarianceSpec{CovarianceKind::Identity, p, 0.0, {}}; }

CovarianceSpec CovarianceSpec::equicorrelated(int p, double r) {
  return CovarianceSpec{CovarianceKind::Equicorrelated, p, r, {}};
}

CovarianceSpec CovarianceSpec::ar1(int p, double r) {
  return CovarianceSpec{CovarianceKind::Ar1, p, r, {}};
}

CovarianceSpec CovarianceSpec::custom_matrix(Matrix sigma) {
  CovarianceSpec spec;
  spec.kind = CovarianceKind::Custom;
  spec.p = static_cast<int>(sigma.rows());
  spec.custom = std::move(sigma);
  return spec;
}

std::string covariance_kind_name(CovarianceKind kind) {
  switch (kind) {
    case CovarianceKind::Identity: return "identity";
    case CovarianceKind::Equicorrelated: return "equicorrelated";
    case CovarianceKind::Ar1: return "ar1";
    case CovarianceKind::Custom: return "custom";
  }
  return "unknown";
}

namespace {

Matrix build_sigma(const CovarianceSpec& spec, bool& renormalized) {
  const int p = spec.p;
  if (p < 1) throw BadParams("covariance dimension must be positive");
  switch (spec.kind) {
    case CovarianceKind::Identity:
      return Matrix::Identity(p, p);
    case CovarianceKind::Equicorrelated: {
      Matrix sigma = Matrix::Constant(p, p, spec.r);
      sigma.diagonal().setOnes();
      return sigma;
    }
    case CovarianceKind::Ar1: {
      Matrix sigma(p, p);
      for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) sigma(i, j) = std::pow(spec.r, std::abs(i - j));
      }
      return sigma;
    }
    case CovarianceKind::Custom: {
      if (spec.custom.rows() != p || spec.custom.cols() != p) {
        throw BadParams("custom covariance must be p x p");
      }
      Matrix sigma = 0.5 * (spec.custom + spec.custom.transpose());
      double max_drift = 0.0;
      for (int i = 0; i < p; ++i) max_drift = std::max(max_drift, std::abs(sigma(i, i) - 1.0));
      if (max_drift > 1e-8) {
        renormalized = true;
        Vector scale(p);
        for (int i = 0; i < p; ++i) {
          if (!(sigma(i, i) > 0.0)) {
            throw NotPositiveDefinite("custom covariance has a nonpositive diagonal");
          }
          scale[i] = 1.0 / std::sqrt(sigma(i, i));
        }
        for (int i = 0; i < p; ++i) {
          for (int j = 0; j < p; ++j) sigma(i, j) *= scale[i] * scale[j];
        }
      }
      return sigma;
    }
  }
  throw BadParams("unknown covariance kind");
}

// Extreme eigenvalues per structure. Equicorrelated has the closed form
// {1-r, 1+(p-1)r}; the AR(1) inverse is tridiagonal, so its spectrum comes
// from a tridiagonal eigensolve; custom falls back to a dense solve.
void extreme_eigenvalues(const CovarianceSpec& spec, const Matrix& sigma, double& lo, double& hi) {
  const int p = spec.p;
  if (p == 1) {
    lo = hi = 1.0;
    return;
  }
  switch (spec.kind) {
    case CovarianceKind::Identity:
      lo = hi = 1.0;
      return;
    case CovarianceKind::Equicorrelated: {
      const double a = 1.0 - spec.r;
      const double b = 1.0 + (p - 1) * spec.r;
      lo = std::min(a, b);
      hi = std::max(a, b);
      return;
    }
    case CovarianceKind::Ar1: {
      const double r = spec.r;
      if (r == 0.0) {
        lo = hi = 1.0;
        return;
      }
      const double scale = 1.0 / (1.0 - r * r);
      Vector diag = Vector::Constant(p, (1.0 + r * r) * scale);
      diag[0] = scale;
      diag[p - 1] = scale;
      Vector sub = Vector::Constant(p - 1, -r * scale);
      Eigen::SelfAdjointEigenSolver<Matrix> eig;
      eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
      // Spectrum of Sigma is the reciprocal spectrum of its inverse.
      lo = 1.0 / eig.eigenvalues().maxCoeff();
      hi = 1.0 / eig.eigenvalues().minCoeff();
      return;
    }
    case CovarianceKind::Custom: {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma, Eigen::EigenvaluesOnly);
      lo = eig.eigenvalues().minCoeff();
      hi = eig.eigenvalues().maxCoeff();
      return;
    }
  }
}

}  // namespace

CovarianceModel materialize(const CovarianceSpec& spec) {
  CovarianceModel model;
  model.spec = spec;
  model.sigma = build_sigma(spec, model.renormalized);
  if (!try_cholesky_lower(model.sigma, kPivotTol, model.chol)) {
    throw NotPositiveDefinite("covariance is not positive definite (pivot < 1e-12)");
  }
  extreme_eigenvalues(spec, model.sigma, model.lambda_min, model.lambda_max);
  model.kappa = model.lambda_max / model.lambda_min;
  return model;
}

DesignMatrix sample_design(const CovarianceModel& model, int n, const SeedPath& seed) {
  if (n < 1) throw BadParams("sample size must be positive");
  const int p = model.spec.p;
  RngStream stream(seed);
  Matrix z(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) z(i, j) = stream.next_normal();
  }
  if (model.spec.kind == CovarianceKind::Identity) {
    return DesignMatrix(std::move(z));
  }
  return DesignMatrix(z * model.chol.transpose());
}

SparseCoefficients sample_beta(int p, int s, double tau, double rho, const SeedPath& seed) {
  if (p < 1 || s < 0 || s > p) throw BadParams("need 0 <= s <= p with p >= 1");
  if (!(tau > 0.0)) throw BadParams("tau must be positive");
  if (!(rho >= 1.0)) throw BadParams("rho must be >= 1");

  RngStream stream(seed);
  std::vector<int> pool(p);
  std::iota(pool.begin(), pool.end(), 1);
  for (int t = 0; t < s; ++t) {
    const auto pick = t + static_cast<int>(stream.next_index(static_cast<std::uint64_t>(p - t)));
    std::swap(pool[t], pool[pick]);
  }
  std::vector<int> support(pool.begin(), pool.begin() + s);
  std::sort(support.begin(), support.end());

  std::vector<double> values(support.size());
  for (std::size_t t = 0; t < values.size(); ++t) {
    const double magnitude = tau + (rho - 1.0) * tau * stream.next_uniform();
    const double sign = (stream.next_u64() & 1u) ? 1.0 : -1.0;
    values[t] = sign * magnitude;
  }
  return SparseCoefficients(p, std::move(support), std::move(values));
}

Vector sample_noise(int n, double sigma, const SeedPath& seed) {
  if (n < 1) throw BadParams("sample size must be positive");
  if (!(sigma >= 0.0)) throw BadParams("sigma must be nonnegative");
  if (sigma == 0.0) return Vector::Zero(n);
  RngStream stream(seed);
  Vector out(n);
  for (int i = 0; i < n; ++i) out[i] = sigma * stream.next_normal();
  return out;
}

}  // namespace linscreen
