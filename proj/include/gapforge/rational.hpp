#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

// Boost's mixed integer/rational equality templates recurse forever once
// C++20 adds reversed candidates; these exact matches take precedence.
namespace boost {
inline bool operator==(const rational<std::int64_t>& r, int i) {
  return r.denominator() == 1 && r.numerator() == i;
}
inline bool operator==(int i, const rational<std::int64_t>& r) { return r == i; }
inline bool operator==(const rational<std::int64_t>& r, std::int64_t i) {
  return r.denominator() == 1 && r.numerator() == i;
}
inline bool operator==(std::int64_t i, const rational<std::int64_t>& r) { return r == i; }
}  // namespace boost

namespace gapforge {

using Rational = boost::rational<std::int64_t>;

double to_double(const Rational& r);
std::string to_string(const Rational& r);

// Accepts "p/q", an integer, or a finite decimal such as "0.85".
Rational parse_rational(const std::string& text);

// floor(r * count) for non-negative r.
std::int64_t floor_times(const Rational& r, std::int64_t count);

}  // namespace gapforge
