#pragma once

#include <cstddef>
#include <cstdint>

#include "gapforge/bits.hpp"
#include "gapforge/circuit/circuit.hpp"
#include "gapforge/rational.hpp"

namespace gapforge::oracle {

struct LayerCheck {
  bool pass = true;
  std::size_t max_input_ones = 0;
  std::size_t allowed_output_ones = 0;
  std::size_t worst_output_ones = 0;
  std::uint64_t strings_checked = 0;
  LayerString witness;
};

// Scans all 2^w inputs in Gray-code order and checks every one with mean at
// most mean_in for an output mean at most mean_out.
LayerCheck exhaustive_layer_check(const circuit::Layer& layer, const Rational& mean_in,
                                  const Rational& mean_out, std::size_t cap = 22);

}  // namespace gapforge::oracle
