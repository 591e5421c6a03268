#ifndef QREV_ERRORS_HPP
#define QREV_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace qrev {

enum class ErrorCode {
  NotHermitian,
  NotSquare,
  SingularOrIndefinite,
  DimensionMismatch,
  InvalidState,
  InvalidChannel,
  NonUniqueFixedPoint,
  NoPositiveFixedPoint,
  ZeroProbabilityBranch,
  NotBalanced,
  NonUniqueStationary,
  NonPositiveStationary,
  ZeroProbabilityState,
  NotStochastic,
  BasisNotOrthonormal,
  IndexOutOfRange,
  EnumerationTooLarge,
  InvalidArgument,
  ParseError,
  UsageError,
};

/// Stable machine-readable name, used in CLI reports.
std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qrev

#endif  // QREV_ERRORS_HPP
