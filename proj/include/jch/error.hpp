#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jch {

enum class ErrorCode {
  // parameter validation
  NonPositiveN,
  NTooSmall,
  NonFiniteValue,
  NegativeRabi,
  NonPositiveTunneling,
  IndexOutOfRange,
  InvalidConfig,
  // numerics
  ComplexEigenvalueBeyondTolerance,
  EigensolverFailure,
  PoleEvaluation,
  NumericalRootFailure,
  ResolutionTooCoarse,
  BisectionBracketFailure,
  ZeroRabi,
  ZeroNormVector,
  UnnormalizedInput,
  DimensionGuardExceeded,
  ProjectorRankMismatch,
  // analysis outcome
  NoBoundState,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for codes that describe bad input rather than a numerical failure.
bool is_validation_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace jch
