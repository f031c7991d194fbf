#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fogsched {

enum class ErrorCode {
  PowerOrderingViolation,
  OverlappingAreas,
  EmptyArea,
  UnassignedGroup,
  NonPositiveParameter,
  DimensionMismatch,
  InaccessiblePair,
  InvalidArgument,
  InvariantViolation,
  DegenerateRun,
  UnsupportedDistribution,
  StateSpaceTooLarge,
  ReducibleChain,
  SingularSystem,
  NonConvergence,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorCode code);

// All domain errors raised by the library carry a code so callers (and tests)
// can dispatch on the failure kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fogsched
