#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace proxygrade {

enum class ErrorCode {
  DuplicateIdentifier,
  UnknownIdentifier,
  UnknownLabel,
  GradeOnIneligibleCell,
  IllegalEligibilityGrant,
  DuplicateCell,
  IndexOutOfRange,
  SelectorDomainExceeded,
  ProxyOutOfRange,
  ShapeMismatch,
  EnumerationLimit,
  NotFair,
  NotOuterConsistent,
  BudgetExceeded,
  NeedsMechanism,
  SchemaError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace proxygrade
