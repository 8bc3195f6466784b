#pragma once

#include <stdexcept>
#include <string>

namespace polar {

enum class ErrorCode {
  SingularMatrix,
  DimensionTooLarge,
  NotPolarizing,
  DomainError,
  BudgetExceeded,
  AssumptionUnmet,
  DegenerateVariance,
  RequiresExactCdf,
  PrefixTooDeep,
  IndexOutOfRange,
  MismatchedLevel,
  FrozenBitNonzero,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

class PolarError : public std::runtime_error {
 public:
  PolarError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace polar
