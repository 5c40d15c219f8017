#include "uwnav/error.hpp"

namespace uwnav {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::GimbalLock: return "GimbalLock";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::ScheduleGap: return "ScheduleGap";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::CoincidentBeacon: return "CoincidentBeacon";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::SingularBasis: return "SingularBasis";
    case ErrorCode::InvalidSpread: return "InvalidSpread";
    case ErrorCode::NonPositiveInnovation: return "NonPositiveInnovation";
    case ErrorCode::SingularFactor: return "SingularFactor";
    case ErrorCode::MismatchedLengths: return "MismatchedLengths";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace uwnav
