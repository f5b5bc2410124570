#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace circlelab {

enum class ErrorCode {
  MissingPrime,
  DepthExceeded,
  TableTooSmall,
  EmptyRange,
  InvalidModulus,
  UnsupportedOrder,
  DisjointnessViolation,
  OutOfWindow,
  PoleProximity,
  IllegalContour,
  NonConvergence,
  CoprimalityViolation,
  HypothesisViolation,
  ThetaTooLarge,
  BudgetExceeded,
  InvalidArgument,
  CorruptCache,
};

std::string_view to_string(ErrorCode code) noexcept;

/// All library failures surface as this exception; `code()` identifies the
/// violated precondition.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace circlelab
