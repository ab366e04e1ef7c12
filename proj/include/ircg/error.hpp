#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ircg {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonFiniteValue,
  InvalidSchedule,
  InvalidDescent,
  NonConvergence,
  ZeroMatrix,
  InfeasibleOracle,
  DegenerateOracle,
  MissingMetadata,
  MissingProjection,
  RadiusTooSmall,
  PreconditionViolated,
  ParseError,
  DuplicateEntry,
  ConfigError,
  InsufficientData,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
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
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::InvalidDescent: return "InvalidDescent";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::InfeasibleOracle: return "InfeasibleOracle";
    case ErrorCode::DegenerateOracle: return "DegenerateOracle";
    case ErrorCode::MissingMetadata: return "MissingMetadata";
    case ErrorCode::MissingProjection: return "MissingProjection";
    case ErrorCode::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace ircg
