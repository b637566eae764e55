#pragma once

#include <stdexcept>
#include <string>

namespace stefan {

enum class ErrorKind {
  InvalidArgument,
  NonStabilized,
  NoPositivePeriodicSolution,
  DegenerateV,
  NonConvergence,
  Degenerate,
  NoSignChange,
  StabilityFailure,
  DomainExhausted,
  BoundViolation,
  OrderingViolation,
  NoBracket,
  NoSemiWave,
  InsufficientData,
  Interrupted,
};

const char* to_string(ErrorKind kind);

/// Every numerical or contract failure raised by the library carries a kind so
/// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace stefan
