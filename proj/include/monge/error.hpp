#ifndef MONGE_ERROR_HPP
#define MONGE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace monge {

enum class ErrorCode {
  NonSymmetric,
  NonFinite,
  NotPositiveDefinite,
  IllConditioned,
  DimMismatch,
  AlphaOutOfRange,
  ZeroMatrix,
  SingularSource,
  ShapeMismatch,
  ZeroSourceSpectrum,
  MissingClass,
  SingularPooled,
  NonPositive,
  BadMagic,
  TruncatedFile,
  IoError,
  NonPositiveOnLogAxis,
  InvalidArgument,
  BadFormat,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSymmetric: return "NonSymmetric";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::SingularSource: return "SingularSource";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ZeroSourceSpectrum: return "ZeroSourceSpectrum";
    case ErrorCode::MissingClass: return "MissingClass";
    case ErrorCode::SingularPooled: return "SingularPooled";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NonPositiveOnLogAxis: return "NonPositiveOnLogAxis";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BadFormat: return "BadFormat";
  }
  return "Unknown";
}

}  // namespace monge

#endif  // MONGE_ERROR_HPP
