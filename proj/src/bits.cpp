#include "gapforge/bits.hpp"

#include <numeric>

#include "gapforge/error.hpp"

namespace gapforge {

BitString BitString::from_string(std::string_view text) {
  BitString out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') {
      fail(ErrorKind::invalid_argument, "bit string may only contain 0 and 1");
    }
    out.set(i, text[i] == '1');
  }
  return out;
}

BitString BitString::from_mask(std::uint64_t mask, std::size_t size) {
  require(size <= 64, ErrorKind::invalid_argument, "mask conversion needs size <= 64");
  BitString out(size);
  for (std::size_t i = 0; i < size; ++i) out.set(i, (mask >> i) & 1U);
  return out;
}

std::size_t BitString::count() const noexcept {
  return std::accumulate(bits_.begin(), bits_.end(), std::size_t{0});
}

Rational BitString::mean() const {
  if (bits_.empty()) return Rational(0);
  return Rational(static_cast<std::int64_t>(count()), static_cast<std::int64_t>(size()));
}

std::uint64_t BitString::to_mask() const {
  require(size() <= 64, ErrorKind::invalid_argument, "mask conversion needs size <= 64");
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (bits_[i]) mask |= std::uint64_t{1} << i;
  }
  return mask;
}

std::string BitString::to_string() const {
  std::string out(size(), '0');
  for (std::size_t i = 0; i < size(); ++i) {
    if (bits_[i]) out[i] = '1';
  }
  return out;
}

}  // namespace gapforge
