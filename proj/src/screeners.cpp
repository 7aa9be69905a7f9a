#include "linscreen/screeners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "linscreen/linalg.hpp"

namespace linscreen {

namespace {
constexpr double kGramPivotTol = 1e-12;
}

const char* screener_name(Screener m) {
  return m == Screener::Sis ? "sis" : "holp";
}

ScreeningMatrix::ScreeningMatrix(Matrix v, double shift)
    : values(std::move(v)), diag_shift(shift) {
  if (values.rows() != values.cols()) {
    throw DimensionMismatch("screening matrix must be square");
  }
  if (!(diag_shift >= 0.0)) throw BadParams("diagonal shift must be nonnegative");
}

Matrix ScreeningMatrix::effective() const {
  Matrix out = values;
  out.diagonal().array() -= diag_shift;
  return out;
}

AncillaryMatrix build_sis(const DesignMatrix& design) {
  Matrix a = design.values().transpose() / static_cast<double>(design.n());
  return AncillaryMatrix{Screener::Sis, std::move(a), design.fingerprint()};
}

AncillaryMatrix build_holp(const DesignMatrix& design) {
  const Matrix& x = design.values();
  const Matrix gram = x * x.transpose();
  Matrix lower;
  if (!try_cholesky_lower(gram, kGramPivotTol, lower)) {
    throw SingularGram("rows of the design are linearly dependent (X X^T pivot underflow)");
  }
  // A^T = (X X^T)^{-1} X, so A = X^T (X X^T)^{-1} without forming the inverse.
  Matrix a_t = cholesky_solve(lower, x);
  return AncillaryMatrix{Screener::Holp, a_t.transpose(), design.fingerprint()};
}

Vector estimate(const AncillaryMatrix& a, const Vector& response) {
  if (response.size() != a.values.cols()) {
    throw DimensionMismatch("response length does not match ancillary columns");
  }
  return a.values * response;
}

Vector sis_estimate(const DesignMatrix& design, const Vector& response) {
  if (response.size() != design.n()) {
    throw DimensionMismatch("response length does not match design rows");
  }
  return design.values().transpose() * (response / static_cast<double>(design.n()));
}

Vector holp_estimate(const DesignMatrix& design, const Vector& response) {
  if (response.size() != design.n()) {
    throw DimensionMismatch("response length does not match design rows");
  }
  const Matrix& x = design.values();
  const Matrix gram = x * x.transpose();
  Matrix lower;
  if (!try_cholesky_lower(gram, kGramPivotTol, lower)) {
    throw SingularGram("rows of the design are linearly dependent (X X^T pivot underflow)");
  }
  Vector z = cholesky_solve(lower, response);
  return x.transpose() * z;
}

ScreeningMatrix screening_matrix(const AncillaryMatrix& a, const DesignMatrix& design,
                                 double shift) {
  if (a.source_hash != design.fingerprint()) {
    throw FingerprintMismatch("ancillary matrix was built from a different design");
  }
  return ScreeningMatrix(a.values * design.values(), shift);
}

double noise_shift(const AncillaryMatrix& a, const Vector& noise, double tau) {
  if (!(tau > 0.0)) throw NonpositiveTau("noise shift requires tau > 0");
  if (noise.size() != a.values.cols()) {
    throw DimensionMismatch("noise length does not match ancillary columns");
  }
  return 2.0 * (a.values * noise).cwiseAbs().maxCoeff() / tau;
}

Submodel select(const Vector& estimate, const SelectionRule& rule) {
  const int p = static_cast<int>(estimate.size());
  std::vector<int> indices;
  if (std::holds_alternative<TopD>(rule)) {
    const int d = std::get<TopD>(rule).d;
    if (d < 0) throw BadParams("top-d selection requires d >= 0");
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double va = std::abs(estimate[a]);
      const double vb = std::abs(estimate[b]);
      if (va != vb) return va > vb;
      return a < b;  // ties: smaller index wins
    });
    const int take = std::min(d, p);
    indices.assign(order.begin(), order.begin() + take);
    for (int& idx : indices) ++idx;
    std::sort(indices.begin(), indices.end());
  } else {
    const double gamma = std::get<Threshold>(rule).gamma;
    if (!(gamma >= 0.0)) throw BadParams("threshold selection requires gamma >= 0");
    for (int i = 0; i < p; ++i) {
      if (std::abs(estimate[i]) > gamma) indices.push_back(i + 1);
    }
  }
  return Submodel{std::move(indices), rule};
}

}  // namespace linscreen
