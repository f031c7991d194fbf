#include "fogsched/error.hpp"

namespace fogsched {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PowerOrderingViolation: return "PowerOrderingViolation";
    case ErrorCode::OverlappingAreas: return "OverlappingAreas";
    case ErrorCode::EmptyArea: return "EmptyArea";
    case ErrorCode::UnassignedGroup: return "UnassignedGroup";
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InaccessiblePair: return "InaccessiblePair";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::DegenerateRun: return "DegenerateRun";
    case ErrorCode::UnsupportedDistribution: return "UnsupportedDistribution";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::ReducibleChain: return "ReducibleChain";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace fogsched
