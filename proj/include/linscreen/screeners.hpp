#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "linscreen/model.hpp"

namespace linscreen {

enum class Screener { Sis, Holp };

const char* screener_name(Screener m);

/// p x n ancillary matrix A defining the linear screener beta_hat = A*Y.
/// SIS uses A = X^T/n; HOLP uses A = X^T (X X^T)^{-1}.
struct AncillaryMatrix {
  Screener method;
  Matrix values;             // p x n
  std::uint64_t source_hash; // fingerprint of the design it was built from
};

/// Phi = A X with an optional diagonal shift. Condition checks operate on
/// values - diag_shift * I; the shift is 0 for noiseless analysis and
/// 2/tau * ||A eps||_inf for the noisy analysis.
struct ScreeningMatrix {
  Matrix values;          // p x p
  double diag_shift = 0.0;

  ScreeningMatrix() = default;
  ScreeningMatrix(Matrix v, double shift = 0.0);

  int p() const { return static_cast<int>(values.rows()); }
  Matrix effective() const;
};

struct TopD {
  int d;
};
struct Threshold {
  double gamma;
};
using SelectionRule = std::variant<TopD, Threshold>;

struct Submodel {
  std::vector<int> indices;  // 1-based, sorted ascending
  SelectionRule rule;
};

AncillaryMatrix build_sis(const DesignMatrix& design);

/// Factors the n x n Gram X X^T once (Cholesky, pivot guard 1e-12 relative to
/// the largest diagonal) and back-substitutes; (X X^T)^{-1} is never formed.
/// Throws SingularGram on rank-deficient rows.
AncillaryMatrix build_holp(const DesignMatrix& design);

Vector estimate(const AncillaryMatrix& a, const Vector& response);

/// Direct estimates that skip materializing A; same screeners, O(n^2 p).
Vector sis_estimate(const DesignMatrix& design, const Vector& response);
Vector holp_estimate(const DesignMatrix& design, const Vector& response);

/// Phi = A X. The ancillary matrix must carry the design's fingerprint.
ScreeningMatrix screening_matrix(const AncillaryMatrix& a, const DesignMatrix& design,
                                 double shift = 0.0);

/// 2 * ||A eps||_inf / tau.
double noise_shift(const AncillaryMatrix& a, const Vector& noise, double tau);

/// TopD keeps the d largest |estimate| entries (ties broken toward the
/// smaller index); Threshold keeps entries strictly above gamma.
Submodel select(const Vector& estimate, const SelectionRule& rule);

}  // namespace linscreen
