#include "proxygrade/rational.hpp"

#include <charconv>
#include <limits>

#include "proxygrade/errors.hpp"

namespace proxygrade {

namespace {

std::int64_t parse_integer(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw Error(ErrorCode::SchemaError,
                "malformed rational '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateIdentifier: return "DuplicateIdentifier";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::GradeOnIneligibleCell: return "GradeOnIneligibleCell";
    case ErrorCode::IllegalEligibilityGrant: return "IllegalEligibilityGrant";
    case ErrorCode::DuplicateCell: return "DuplicateCell";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SelectorDomainExceeded: return "SelectorDomainExceeded";
    case ErrorCode::ProxyOutOfRange: return "ProxyOutOfRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EnumerationLimit: return "EnumerationLimit";
    case ErrorCode::NotFair: return "NotFair";
    case ErrorCode::NotOuterConsistent: return "NotOuterConsistent";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NeedsMechanism: return "NeedsMechanism";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

std::string to_string(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" +
         std::to_string(value.denominator());
}

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::SchemaError, "empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_integer(text.substr(0, slash), text);
    auto den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) {
      throw Error(ErrorCode::SchemaError,
                  "zero denominator in '" + std::string(text) + "'");
    }
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto int_part = text.substr(0, dot);
    auto frac_part = text.substr(dot + 1);
    if (frac_part.empty() || frac_part.size() > 15 ||
        frac_part.find_first_not_of("0123456789") != std::string_view::npos) {
      throw Error(ErrorCode::SchemaError,
                  "malformed rational '" + std::string(text) + "'");
    }
    bool negative = !int_part.empty() && int_part.front() == '-';
    std::int64_t whole = 0;
    if (!int_part.empty() && int_part != "-" && int_part != "+") {
      whole = parse_integer(int_part, text);
    }
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    auto frac = parse_integer(frac_part, text);
    Rational magnitude = Rational(whole < 0 ? -whole : whole) +
                         Rational(frac, scale);
    return negative ? -magnitude : magnitude;
  }
  return Rational(parse_integer(text, text));
}

double to_double(const Rational& value) {
  return static_cast<double>(value.numerator()) /
         static_cast<double>(value.denominator());
}

}  // namespace proxygrade
