#include "gapforge/oracle/layer_check.hpp"

#include <bit>
#include <string>
#include <vector>

#include "gapforge/error.hpp"

namespace gapforge::oracle {

LayerCheck exhaustive_layer_check(const circuit::Layer& layer, const Rational& mean_in,
                                  const Rational& mean_out, std::size_t cap) {
  std::size_t w = layer.input_width;
  require(w <= cap && w < 64, ErrorKind::resource_cap,
          "layer width " + std::to_string(w) + " exceeds the exhaustive cap " + std::to_string(cap));
  std::size_t gates = layer.width();
  LayerCheck out;
  out.max_input_ones = static_cast<std::size_t>(floor_times(mean_in, static_cast<std::int64_t>(w)));
  out.allowed_output_ones = static_cast<std::size_t>(floor_times(mean_out, static_cast<std::int64_t>(gates)));

  std::vector<std::vector<std::size_t>> readers(w);
  for (std::size_t g = 0; g < gates; ++g) {
    for (auto i : layer.gates[g].inputs) readers[i].push_back(g);
  }
  std::vector<std::size_t> ones(gates, 0);
  std::vector<char> firing(gates, 0);
  std::size_t fired = 0;
  for (std::size_t g = 0; g < gates; ++g) {
    firing[g] = layer.gates[g].fires(0) ? 1 : 0;
    fired += static_cast<std::size_t>(firing[g]);
  }

  std::uint64_t x = 0;
  std::uint64_t worst = 0;
  bool have = false;
  auto visit = [&] {
    if (static_cast<std::size_t>(std::popcount(x)) > out.max_input_ones) return;
    ++out.strings_checked;
    if (!have || fired > out.worst_output_ones) {
      out.worst_output_ones = fired;
      worst = x;
      have = true;
    }
  };
  visit();
  std::uint64_t total = std::uint64_t{1} << w;
  for (std::uint64_t i = 1; i < total; ++i) {
    auto bit = static_cast<std::size_t>(std::countr_zero(i));
    x ^= std::uint64_t{1} << bit;
    bool now_one = (x >> bit) & 1U;
    for (auto g : readers[bit]) {
      ones[g] = now_one ? ones[g] + 1 : ones[g] - 1;
      char f = layer.gates[g].fires(ones[g]) ? 1 : 0;
      if (f != firing[g]) {
        fired = f ? fired + 1 : fired - 1;
        firing[g] = f;
      }
    }
    visit();
  }
  out.witness = LayerString::from_mask(worst, w);
  out.pass = out.worst_output_ones <= out.allowed_output_ones;
  return out;
}

}  // namespace gapforge::oracle
