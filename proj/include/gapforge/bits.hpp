#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gapforge/rational.hpp"

namespace gapforge {

// Fixed-length bit vector used for assignments and layer strings.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t size, bool value = false) : bits_(size, value ? 1 : 0) {}

  static BitString from_string(std::string_view text);
  static BitString from_mask(std::uint64_t mask, std::size_t size);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }
  void flip(std::size_t i) { bits_[i] ^= 1; }

  std::size_t count() const noexcept;
  // Mean of the bits; 0 for the empty string.
  Rational mean() const;
  bool all() const noexcept { return count() == size(); }

  // Low bits packed little-endian; requires size() <= 64.
  std::uint64_t to_mask() const;
  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

using Assignment = BitString;
using LayerString = BitString;

}  // namespace gapforge
