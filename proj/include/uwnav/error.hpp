#pragma once

#include <stdexcept>
#include <string>

namespace uwnav {

enum class ErrorCode {
  GimbalLock,
  Singular,
  ScheduleGap,
  OutOfDomain,
  CoincidentBeacon,
  DegenerateGeometry,
  SingularBasis,
  InvalidSpread,
  NonPositiveInnovation,
  SingularFactor,
  MismatchedLengths,
  InvalidArgument,
  Config,
  Io,
};

const char* to_string(ErrorCode code);

/// Exception carrying a machine-checkable error code.
class NavError : public std::runtime_error {
 public:
  NavError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace uwnav
