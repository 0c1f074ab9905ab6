#include "gapforge/rational.hpp"

#include <cctype>

#include "gapforge/error.hpp"

namespace gapforge {

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_int(const std::string& text, const std::string& whole) {
  if (text.empty()) fail(ErrorKind::invalid_argument, "bad rational: " + whole);
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) fail(ErrorKind::invalid_argument, "bad rational: " + whole);
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      fail(ErrorKind::invalid_argument, "bad rational: " + whole);
    }
  }
  return std::stoll(text);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    auto den = parse_int(text.substr(slash + 1), text);
    if (den == 0) fail(ErrorKind::invalid_argument, "zero denominator: " + text);
    return Rational(parse_int(text.substr(0, slash), text), den);
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    auto frac = text.substr(dot + 1);
    if (frac.size() > 15) fail(ErrorKind::invalid_argument, "too many decimals: " + text);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    auto whole = text.substr(0, dot);
    bool negative = !whole.empty() && whole[0] == '-';
    std::int64_t int_part = (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_int(whole, text);
    std::int64_t frac_part = frac.empty() ? 0 : parse_int(frac, text);
    std::int64_t magnitude = (int_part < 0 ? -int_part : int_part) * scale + frac_part;
    return Rational(negative ? -magnitude : magnitude, scale);
  }
  return Rational(parse_int(text, text));
}

std::int64_t floor_times(const Rational& r, std::int64_t count) {
  return (r.numerator() * count) / r.denominator();
}

}  // namespace gapforge
