#pragma once

#include <stdexcept>
#include <string>

namespace hypersurf {

enum class ErrorCode {
  InvalidGrid,
  BoundaryStencil,
  GridMismatch,
  NotPositiveDefinite,
  NotPositiveOperator,
  NotCurvatureLike,
  WeylObstruction,
  InvalidSeed,
  FlatnessViolation,
  SingularCouplingMatrix,
  EmptyLevelBand,
  DegenerateGradient,
  UnsupportedDimension,
  SpecError,
  IoError,
  SchemaError,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library. `value` carries the offending number
// when there is one (smallest eigenvalue, Weyl* norm, residual, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double value = 0.0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  double value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  double value_;
};

}  // namespace hypersurf
