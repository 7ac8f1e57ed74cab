#pragma once

#include <stdexcept>
#include <string>

namespace h10 {

enum class Errc {
  InvalidArgument,
  ZeroDiscriminant,
  BadReduction,
  FieldMismatch,
  InvalidTwist,
  NotSplit,
  PrecisionExhausted,
  NoFormalNeighborhood,
  Inconclusive,
  BadFixture,
  ZeroLValue,
  UnsupportedTwist,
  IncompleteChecklist,
  PreconditionFailed,
  ParseError,
  InvariantViolation,
  SieveMembershipFailed,
  MissingFixture,
};

const char* to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace h10
