#pragma once

#include <stdexcept>
#include <string>

namespace nare {

enum class ErrorKind {
  SingularMatrix,
  InvalidSize,
  InvalidParams,
  NotCriticalCase,
  PoleHit,
  BracketFailure,
  ShiftOutOfRegion,
  Breakdown,
  InsufficientHistory,
  InvalidInput,
};

const char* to_string(ErrorKind kind) noexcept;

class NareError : public std::runtime_error {
 public:
  NareError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when an inner solve of the doubling recurrence hits a singular
/// pivot. Carries the index of the step that failed.
class BreakdownError : public NareError {
 public:
  BreakdownError(int iteration, const std::string& what)
      : NareError(ErrorKind::Breakdown, "step " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace nare
