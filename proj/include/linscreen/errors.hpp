#pragma once

#include <stdexcept>
#include <string>

namespace linscreen {

// Two error families matching the CLI exit-code contract:
// validation errors exit with 2, numerical errors with 3.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : ValidationError {
  using ValidationError::ValidationError;
};

struct ConstantColumn : ValidationError {
  explicit ConstantColumn(int column_1based)
      : ValidationError("column " + std::to_string(column_1based) +
                        " has zero sample variance"),
        column(column_1based) {}
  int column;
};

struct BadSparsity : ValidationError {
  using ValidationError::ValidationError;
};

struct AsymmetricInput : ValidationError {
  using ValidationError::ValidationError;
};

struct NonpositiveTau : ValidationError {
  using ValidationError::ValidationError;
};

struct BadSigns : ValidationError {
  using ValidationError::ValidationError;
};

struct BadDiagonal : ValidationError {
  using ValidationError::ValidationError;
};

struct IndexOverlap : ValidationError {
  using ValidationError::ValidationError;
};

struct TooLarge : ValidationError {
  using ValidationError::ValidationError;
};

struct HypothesisViolated : ValidationError {
  using ValidationError::ValidationError;
};

struct BadC0 : ValidationError {
  using ValidationError::ValidationError;
};

struct BadParams : ValidationError {
  using ValidationError::ValidationError;
};

struct FingerprintMismatch : ValidationError {
  using ValidationError::ValidationError;
};

struct SingularGram : NumericalError {
  using NumericalError::NumericalError;
};

struct NotPositiveDefinite : NumericalError {
  using NumericalError::NumericalError;
};

struct SingularSubmatrix : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace linscreen
