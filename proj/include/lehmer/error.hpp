#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lehmer {

enum class Errc {
  InvalidModulus,
  InvalidArgument,
  NotInvertible,
  ZeroExponent,
  ExponentOutOfRange,
  PlanMismatch,
  AllZeroCoefficients,
  CoprimalityViolation,
  EvenModulus,
  RangeTooLarge,
  InsufficientData,
  Overflow,
};

std::string_view to_string(Errc code);

/// Every precondition failure in the library is reported as an Error carrying
/// one of the codes above; callers branch on code(), humans read what().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lehmer
