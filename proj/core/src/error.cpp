#include "stefan/error.hpp"

namespace stefan {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonStabilized: return "NonStabilized";
    case ErrorKind::NoPositivePeriodicSolution: return "NoPositivePeriodicSolution";
    case ErrorKind::DegenerateV: return "DegenerateV";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::StabilityFailure: return "StabilityFailure";
    case ErrorKind::DomainExhausted: return "DomainExhausted";
    case ErrorKind::BoundViolation: return "BoundViolation";
    case ErrorKind::OrderingViolation: return "OrderingViolation";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::NoSemiWave: return "NoSemiWave";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::Interrupted: return "Interrupted";
  }
  return "Unknown";
}

}  // namespace stefan
