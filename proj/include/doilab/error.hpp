#ifndef DOILAB_ERROR_HPP
#define DOILAB_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace doilab {

enum class ErrorCode {
  InvalidArgument,
  NotHermitian,
  NonCommuting,
  DegenerateResolutionFailure,
  EvaluationFailure,
  DimensionMismatch,
  ShapeMismatch,
  SymbolEvaluationFailure,
  MissingDerivative,
  GridMissingOrigin,
  InvalidSharpness,
  GridTooCoarse,
  ZeroFrequency,
  RankTooSmall,
  InvalidP,
  ZeroPerturbation,
  UnknownFunction,
  ConfigError,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NonCommuting: return "NonCommuting";
    case ErrorCode::DegenerateResolutionFailure: return "DegenerateResolutionFailure";
    case ErrorCode::EvaluationFailure: return "EvaluationFailure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SymbolEvaluationFailure: return "SymbolEvaluationFailure";
    case ErrorCode::MissingDerivative: return "MissingDerivative";
    case ErrorCode::GridMissingOrigin: return "GridMissingOrigin";
    case ErrorCode::InvalidSharpness: return "InvalidSharpness";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::ZeroFrequency: return "ZeroFrequency";
    case ErrorCode::RankTooSmall: return "RankTooSmall";
    case ErrorCode::InvalidP: return "InvalidP";
    case ErrorCode::ZeroPerturbation: return "ZeroPerturbation";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can report it in machine-parsable form.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace doilab

#endif  // DOILAB_ERROR_HPP
