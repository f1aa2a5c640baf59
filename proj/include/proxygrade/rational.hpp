#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

// Boost 1.74 with C++20: `rational == integer` picks the reversed form of
// the library's own friend operator and recurses forever. Exact-match
// non-template overloads take precedence over both.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, int b) {
  return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, long b) {
  return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, long long b) {
  return a.denominator() == 1 && a.numerator() == b;
}
}  // namespace boost

namespace proxygrade {

/// Exact grade arithmetic. Pool values are averages of a handful of grade
/// positions, so 64-bit numerators and denominators are ample.
using Rational = boost::rational<std::int64_t>;

/// "p" for integers, "p/q" otherwise (q > 0, reduced).
std::string to_string(const Rational& value);

/// Accepts "p", "-p", "p/q" and finite decimals such as "2.5".
Rational parse_rational(std::string_view text);

double to_double(const Rational& value);

}  // namespace proxygrade
