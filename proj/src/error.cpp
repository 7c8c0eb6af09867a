#include "jch/error.hpp"

namespace jch {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveN: return "NonPositiveN";
    case ErrorCode::NTooSmall: return "NTooSmall";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NegativeRabi: return "NegativeRabi";
    case ErrorCode::NonPositiveTunneling: return "NonPositiveTunneling";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ComplexEigenvalueBeyondTolerance: return "ComplexEigenvalueBeyondTolerance";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::PoleEvaluation: return "PoleEvaluation";
    case ErrorCode::NumericalRootFailure: return "NumericalRootFailure";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::BisectionBracketFailure: return "BisectionBracketFailure";
    case ErrorCode::ZeroRabi: return "ZeroRabi";
    case ErrorCode::ZeroNormVector: return "ZeroNormVector";
    case ErrorCode::UnnormalizedInput: return "UnnormalizedInput";
    case ErrorCode::DimensionGuardExceeded: return "DimensionGuardExceeded";
    case ErrorCode::ProjectorRankMismatch: return "ProjectorRankMismatch";
    case ErrorCode::NoBoundState: return "NoBoundState";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveN:
    case ErrorCode::NTooSmall:
    case ErrorCode::NonFiniteValue:
    case ErrorCode::NegativeRabi:
    case ErrorCode::NonPositiveTunneling:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::InvalidConfig:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace jch
