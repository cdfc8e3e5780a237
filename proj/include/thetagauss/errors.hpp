#pragma once

#include <stdexcept>
#include <string>

namespace thetagauss {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NotSymmetric,
  NonPositiveDefinite,
  ToleranceTooTight,
  ToleranceUnreachable,
  DivisorHit,
  NotUnimodular,
  NotPD,
  NoConvergence,
  DegenerateSample,
  TooFewSamples,
  IndeterminatePoint,
  NoZeroFound,
  SingularDivisorPoint,
  RankDeficientInput,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NonPositiveDefinite: return "NonPositiveDefinite";
    case ErrorCode::ToleranceTooTight: return "ToleranceTooTight";
    case ErrorCode::ToleranceUnreachable: return "ToleranceUnreachable";
    case ErrorCode::DivisorHit: return "DivisorHit";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::NotPD: return "NotPD";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::IndeterminatePoint: return "IndeterminatePoint";
    case ErrorCode::NoZeroFound: return "NoZeroFound";
    case ErrorCode::SingularDivisorPoint: return "SingularDivisorPoint";
    case ErrorCode::RankDeficientInput: return "RankDeficientInput";
  }
  return "Unknown";
}

/// Numerical failures (NoConvergence, DivisorHit, ...) and contract violations
/// share one exception type; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures of the numerics rather than of the input.
  bool is_numerical() const noexcept {
    switch (code_) {
      case ErrorCode::ToleranceUnreachable:
      case ErrorCode::DivisorHit:
      case ErrorCode::NoConvergence:
      case ErrorCode::IndeterminatePoint:
      case ErrorCode::NoZeroFound:
      case ErrorCode::SingularDivisorPoint:
      case ErrorCode::RankDeficientInput:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
};

}  // namespace thetagauss
