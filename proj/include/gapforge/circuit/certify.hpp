#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gapforge/bits.hpp"
#include "gapforge/circuit/circuit.hpp"
#include "gapforge/rational.hpp"

namespace gapforge::circuit {

enum class CertMode { exhaustive, statistical, bound };

const char* to_string(CertMode mode);

struct GoodnessOptions {
  std::size_t exhaustive_cap = 20;
  std::size_t trials = 64;
  std::uint64_t seed = 1;
  Rational mean_in = Rational(7, 10);
  Rational mean_out = Rational(6, 10);
  // Swap steps per local search; 0 means 20 times the input width.
  std::size_t search_steps = 0;
};

struct LayerGoodness {
  std::size_t layer = 0;
  std::size_t input_width = 0;
  std::size_t output_width = 0;
  CertMode mode = CertMode::exhaustive;
  bool pass = true;
  std::size_t max_input_ones = 0;
  std::size_t allowed_output_ones = 0;
  std::size_t worst_output_ones = 0;
  std::uint64_t strings_checked = 0;
  LayerString worst_input;
};

struct GoodnessCertificate {
  std::size_t m = 0;
  std::vector<std::size_t> widths;
  Rational mean_in;
  Rational mean_out;
  std::size_t exhaustive_cap = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<LayerGoodness> layers;

  bool pass() const;
};

// Every input with at most floor(mean_in w) ones must fire at most
// floor(mean_out g) of the g gates. Exhaustive below the cap, otherwise a
// seeded search over random, clustered, gate-targeted and locally improved
// strings.
LayerGoodness certify_layer_goodness(const Layer& layer, std::size_t index, const GoodnessOptions& options);
GoodnessCertificate certify_goodness(const RobustCircuit& c, const GoodnessOptions& options = {});

struct CompletenessOptions {
  Rational completeness = Rational(9, 10);
  // Largest number of zero patterns enumerated exactly.
  std::uint64_t exhaustive_limit = 2'000'000;
  std::size_t trials = 64;
  std::uint64_t seed = 1;
  std::size_t search_steps = 0;
};

// floor(w (1 - c) / 2^i): the zero count allowed at layer i.
std::size_t zero_budget(std::size_t width, std::size_t layer, const Rational& completeness);

struct LayerCompleteness {
  std::size_t layer = 0;
  CertMode mode = CertMode::bound;
  bool pass = true;
  std::size_t zeros_in = 0;
  std::size_t allowed_zeros_out = 0;
  std::size_t worst_zeros_out = 0;
  std::uint64_t strings_checked = 0;
  LayerString worst_input;
};

struct CompletenessCertificate {
  Rational completeness;
  std::vector<LayerCompleteness> layers;

  bool pass() const;
  // No layer relied on sampling.
  bool exact() const;
};

// Checks each transition: inputs with the layer's zero budget produce at most
// the next layer's budget of zeros.
CompletenessCertificate certify_completeness(const RobustCircuit& c, const CompletenessOptions& options = {});

struct CircuitCertificate {
  GoodnessCertificate goodness;
  std::optional<CompletenessCertificate> completeness;

  bool pass() const { return goodness.pass() && (!completeness || completeness->pass()); }
};

struct CertifiedCircuit {
  RobustCircuit circuit;
  CircuitCertificate certificate;
  std::size_t rounds = 0;
};

// Builds a deterministic circuit, raising the wiring degree of failing layers
// until both certificates pass.
CertifiedCircuit build_certified_deterministic(std::size_t m, DeterministicOptions options,
                                               const GoodnessOptions& goodness = {},
                                               const CompletenessOptions& completeness = {},
                                               std::size_t max_rounds = 40);

bool reaches_all_ones(const RobustCircuit& c, const LayerString& input);

// Strings of width m with floor(m (1 - c)) zeros: a zero prefix, evenly
// spaced zeros, and `random_count` seeded random placements.
std::vector<LayerString> completeness_inputs(std::size_t m, const Rational& completeness, std::size_t random_count,
                                             std::uint64_t seed);

struct FanInTrial {
  std::size_t fan_in = 0;
  bool completeness = false;
  bool goodness = false;
};

struct FanInSearch {
  std::size_t fan_in = 0;
  std::vector<FanInTrial> trials;
};

// Smallest fan-in for which every tuning seed maps every input to an all-ones
// top layer and passes the goodness certificate.
FanInSearch tune_fan_in(std::size_t m, std::span<const LayerString> inputs,
                        std::span<const std::uint64_t> seeds, const GoodnessOptions& goodness,
                        std::size_t max_fan_in = 64, Rational theta = Rational(4, 5));

}  // namespace gapforge::circuit
