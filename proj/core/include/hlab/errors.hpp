#pragma once

#include <stdexcept>
#include <string>

namespace hlab {

/// Error categories used across the library. Each maps to one contract
/// violation; the CLI maps categories onto exit codes.
enum class ErrorCode {
  NonPositiveLambda,
  DimensionMismatch,
  DomainEscape,
  GridMismatch,
  SingularSigma,
  InvalidExponents,
  DegenerateDelta,
  CoincidentStart,
  StepTooCoarse,
  NonConstantZeta,
  AlphaOutOfRange,
  ExponentDegenerate,
  FunctionBelowOne,
  FunctionUnbounded,
  InvalidWindow,
  CenterOutsideDomain,
  ConfigParse,
  Validation,
};

const char* to_string(ErrorCode code);

class LabError : public std::runtime_error {
 public:
  LabError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw LabError(code, what);
}

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveLambda: return "NonPositiveLambda";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DomainEscape: return "DomainEscape";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::SingularSigma: return "SingularSigma";
    case ErrorCode::InvalidExponents: return "InvalidExponents";
    case ErrorCode::DegenerateDelta: return "DegenerateDelta";
    case ErrorCode::CoincidentStart: return "CoincidentStart";
    case ErrorCode::StepTooCoarse: return "StepTooCoarse";
    case ErrorCode::NonConstantZeta: return "NonConstantZeta";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::ExponentDegenerate: return "ExponentDegenerate";
    case ErrorCode::FunctionBelowOne: return "FunctionBelowOne";
    case ErrorCode::FunctionUnbounded: return "FunctionUnbounded";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::CenterOutsideDomain: return "CenterOutsideDomain";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::Validation: return "Validation";
  }
  return "UnknownError";
}

}  // namespace hlab
