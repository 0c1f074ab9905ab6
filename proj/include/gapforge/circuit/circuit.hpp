#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gapforge/bits.hpp"
#include "gapforge/csp/instance.hpp"
#include "gapforge/rational.hpp"
#include "gapforge/sampler/sampler.hpp"

namespace gapforge::circuit {

enum class Variant { deterministic, randomized };
enum class Wiring { sampler, full, random };

const char* to_string(Variant v);
const char* to_string(Wiring w);

struct ThresholdGate {
  // Sorted; repeated entries count with multiplicity.
  std::vector<std::size_t> inputs;
  Rational threshold;

  // 1 iff ones / |inputs| >= threshold.
  bool fires(std::size_t ones) const {
    return static_cast<std::int64_t>(ones) * threshold.denominator() >=
           threshold.numerator() * static_cast<std::int64_t>(inputs.size());
  }
  bool evaluate(const LayerString& previous) const;

  friend bool operator==(const ThresholdGate&, const ThresholdGate&) = default;
};

struct Layer {
  std::size_t input_width = 0;
  Wiring wiring = Wiring::full;
  std::vector<ThresholdGate> gates;
  // Second eigenvalue of the wiring graph for sampler layers.
  std::optional<double> lambda;

  std::size_t width() const noexcept { return gates.size(); }
  std::size_t max_fan_in() const;
  LayerString evaluate(const LayerString& previous) const;

  friend bool operator==(const Layer& a, const Layer& b) {
    return a.input_width == b.input_width && a.wiring == b.wiring && a.gates == b.gates;
  }
};

// The gap-dependent constants: gate threshold, the input-mean bound that the
// damping property starts from, and the output-mean bound it must reach.
struct GapThresholds {
  Rational theta;
  Rational mean_in;
  Rational mean_out;
  Rational completeness;
  // Soundness of the transformed system.
  Rational transformed_soundness;
};

// theta = s + 2(c-s)/3, mean_in = s + (c-s)/3, mean_out = s, s' = 1 - (c-s)/3.
GapThresholds thresholds_for(const csp::GapSpec& gap);
GapThresholds default_thresholds();

// ceil(m / 2^i).
std::size_t width_at(std::size_t m, std::size_t layer);
// ceil(log2 m).
std::size_t deterministic_depth(std::size_t m);
// Smallest d with 2^(2^d) >= m.
std::size_t randomized_depth(std::size_t m);

class RobustCircuit {
 public:
  RobustCircuit(std::size_t m, Variant variant, Rational theta, std::vector<Layer> layers,
                std::optional<std::uint64_t> seed = std::nullopt,
                std::optional<std::size_t> fan_in = std::nullopt);

  std::size_t m() const noexcept { return m_; }
  std::size_t depth() const noexcept { return layers_.size(); }
  Variant variant() const noexcept { return variant_; }
  const Rational& theta() const noexcept { return theta_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  // Layer i (1-based) maps layer string i-1 to layer string i.
  const Layer& layer(std::size_t i) const { return layers_.at(i - 1); }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }
  std::optional<std::size_t> fan_in() const noexcept { return fan_in_; }

  // w_0 .. w_d.
  std::vector<std::size_t> widths() const;
  std::size_t total_gates() const;
  std::size_t max_fan_in() const;

  // z_1 .. z_d.
  std::vector<LayerString> evaluate(const LayerString& input) const;

  friend bool operator==(const RobustCircuit& a, const RobustCircuit& b) {
    return a.m_ == b.m_ && a.variant_ == b.variant_ && a.theta_ == b.theta_ && a.layers_ == b.layers_;
  }

 private:
  std::size_t m_;
  Variant variant_;
  Rational theta_;
  std::vector<Layer> layers_;
  std::optional<std::uint64_t> seed_;
  std::optional<std::size_t> fan_in_;
};

// Sampler parameters for the deterministic wiring: (1/10, 6/10, 8/10) with a
// desk-scale lambda target; certification decides whether a layer is usable.
sampler::SamplerParams default_wiring_params();

struct LayerOverride {
  std::size_t min_degree = 0;
  std::uint64_t salt = 0;
};

struct DeterministicOptions {
  sampler::SamplerParams sampler = default_wiring_params();
  // Layers whose input width is at most this use full fan-in.
  std::size_t cutoff = 8;
  std::uint64_t seed = 1;
  Rational theta = Rational(4, 5);
  // Indexed by layer - 1.
  std::vector<LayerOverride> overrides;
};

RobustCircuit build_deterministic(std::size_t m, const DeterministicOptions& options = {});
RobustCircuit build_randomized(std::size_t m, std::size_t fan_in, std::uint64_t seed,
                               Rational theta = Rational(4, 5));

std::string serialize_circuit(const RobustCircuit& c);
RobustCircuit parse_circuit(std::string_view text);

}  // namespace gapforge::circuit
