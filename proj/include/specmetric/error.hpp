#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specmetric {

/// Failure categories reported by the library. The CLI maps all of them to
/// exit status 1; only argument-parsing failures produce status 2.
enum class ErrorKind {
  kInvalidArgument,
  kUnstableModel,
  kNotNormalizable,
  kDivisionByZero,
  kNoFiniteGeodesic,
  kDegenerateCovariance,
  kEstimationFailed,
  kParse,
  kInvalidGrid,
  kConeViolation,
  kIo,
  kInternal,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kUnstableModel: return "unstable model";
    case ErrorKind::kNotNormalizable: return "not normalizable";
    case ErrorKind::kDivisionByZero: return "division by zero";
    case ErrorKind::kNoFiniteGeodesic: return "no finite geodesic";
    case ErrorKind::kDegenerateCovariance: return "degenerate covariance";
    case ErrorKind::kEstimationFailed: return "estimation failed";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kInvalidGrid: return "invalid grid";
    case ErrorKind::kConeViolation: return "cone violation";
    case ErrorKind::kIo: return "i/o error";
    case ErrorKind::kInternal: return "internal error";
  }
  return "unknown error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorKind::kInvalidArgument, message);
}

}  // namespace detail
}  // namespace specmetric
