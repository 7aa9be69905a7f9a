#include "linscreen/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace linscreen {

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed) {
  const auto* bytes_ptr = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= bytes_ptr[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::uint64_t matrix_fingerprint(const Matrix& m) {
  const std::int64_t dims[2] = {m.rows(), m.cols()};
  std::uint64_t h = fnv1a(dims, sizeof(dims));
  return fnv1a(m.data(), sizeof(double) * static_cast<std::size_t>(m.size()), h);
}

}  // namespace

DesignMatrix::DesignMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw BadParams("design matrix needs at least one row and one column");
  }
  if (!values_.allFinite()) {
    throw BadParams("design matrix entries must be finite");
  }
  fingerprint_ = matrix_fingerprint(values_);
}

SparseCoefficients::SparseCoefficients(int p, std::vector<int> support,
                                       std::vector<double> values)
    : p_(p), support_(std::move(support)), values_(std::move(values)) {
  if (p_ < 1) throw BadParams("coefficient dimension must be positive");
  if (support_.size() != values_.size()) {
    throw DimensionMismatch("support and value lists differ in length");
  }
  for (std::size_t idx = 0; idx < support_.size(); ++idx) {
    const int j = support_[idx];
    if (j < 1 || j > p_) throw BadParams("support index out of range");
    if (idx > 0 && support_[idx - 1] >= j) {
      throw BadParams("support indices must be strictly increasing");
    }
    if (!(std::isfinite(values_[idx]) && values_[idx] != 0.0)) {
      throw BadParams("support values must be finite and nonzero");
    }
  }
}

double SparseCoefficients::rho() const {
  if (support_.empty()) return 1.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double v : values_) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  return hi / lo;
}

double SparseCoefficients::tau() const {
  double lo = std::numeric_limits<double>::infinity();
  for (double v : values_) lo = std::min(lo, std::abs(v));
  return lo;
}

Vector SparseCoefficients::dense() const {
  Vector out = Vector::Zero(p_);
  for (std::size_t idx = 0; idx < support_.size(); ++idx) {
    out[support_[idx] - 1] = values_[idx];
  }
  return out;
}

DesignMatrix standardize(const DesignMatrix& design) {
  const Matrix& x = design.values();
  const int n = design.n();
  const int p = design.p();
  Matrix out(n, p);
  for (int j = 0; j < p; ++j) {
    const double mean = x.col(j).sum() / n;
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
      const double c = x(i, j) - mean;
      var += c * c;
    }
    var /= n;
    if (!(var > 0.0)) throw ConstantColumn(j + 1);
    const double sd = std::sqrt(var);
    for (int i = 0; i < n; ++i) out(i, j) = (x(i, j) - mean) / sd;
  }
  return DesignMatrix(std::move(out));
}

RegressionInstance assemble(const DesignMatrix& design, const SparseCoefficients& beta,
                            const Vector& noise) {
  if (beta.p() != design.p()) {
    throw DimensionMismatch("coefficient dimension does not match design columns");
  }
  if (noise.size() != design.n()) {
    throw DimensionMismatch("noise length does not match design rows");
  }
  const Matrix& x = design.values();
  Vector y(design.n());
  for (int i = 0; i < design.n(); ++i) {
    double acc = 0.0;
    for (std::size_t idx = 0; idx < beta.support().size(); ++idx) {
      acc += x(i, beta.support()[idx] - 1) * beta.values()[idx];
    }
    y[i] = acc + noise[i];
  }
  return RegressionInstance{design, beta, noise, std::move(y)};
}

bool membership(const SparseCoefficients& beta, int s, double rho, double tau) {
  if (s < 0 || rho < 1.0 || tau < 0.0) {
    throw BadParams("membership expects s >= 0, rho >= 1, tau >= 0");
  }
  if (beta.s() == 0) return true;
  return beta.s() <= s && beta.rho() <= rho && beta.tau() >= tau;
}

}  // namespace linscreen
