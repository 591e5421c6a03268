#include "qrev/errors.hpp"

namespace qrev {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::SingularOrIndefinite: return "SingularOrIndefinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidChannel: return "InvalidChannel";
    case ErrorCode::NonUniqueFixedPoint: return "NonUniqueFixedPoint";
    case ErrorCode::NoPositiveFixedPoint: return "NoPositiveFixedPoint";
    case ErrorCode::ZeroProbabilityBranch: return "ZeroProbabilityBranch";
    case ErrorCode::NotBalanced: return "NotBalanced";
    case ErrorCode::NonUniqueStationary: return "NonUniqueStationary";
    case ErrorCode::NonPositiveStationary: return "NonPositiveStationary";
    case ErrorCode::ZeroProbabilityState: return "ZeroProbabilityState";
    case ErrorCode::NotStochastic: return "NotStochastic";
    case ErrorCode::BasisNotOrthonormal: return "BasisNotOrthonormal";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace qrev
