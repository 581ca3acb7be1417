#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pjd {

enum class ErrorCode {
  SpaceMismatch,
  NotDivisible,
  NotPolynomial,
  MomentUnavailable,
  DomainViolation,
  BoundaryViolation,
  Type4Unsupported,
  NotAffineJumpSizes,
  AssumptionAViolated,
  InvalidTriplet,
  DegenerateGammas,
  NonFinite,
  UnsupportedForSimulation,
  ExplodedIntensity,
  TooIndefinite,
  TimeNotOnGrid,
  OutOfRange,
  CurveMissingTenor,
  LogMomentUndefined,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pjd
