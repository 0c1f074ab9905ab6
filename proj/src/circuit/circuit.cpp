#include "gapforge/circuit/circuit.hpp"

#include <algorithm>
#include <sstream>

#include "gapforge/error.hpp"
#include "gapforge/random.hpp"

namespace gapforge::circuit {

const char* to_string(Variant v) { return v == Variant::deterministic ? "det" : "rand"; }

const char* to_string(Wiring w) {
  switch (w) {
    case Wiring::sampler: return "sampler";
    case Wiring::full: return "full";
    case Wiring::random: return "random";
  }
  return "unknown";
}

bool ThresholdGate::evaluate(const LayerString& previous) const {
  std::size_t ones = 0;
  for (auto i : inputs) ones += previous[i] ? 1 : 0;
  return fires(ones);
}

std::size_t Layer::max_fan_in() const {
  std::size_t best = 0;
  for (const auto& g : gates) best = std::max(best, g.inputs.size());
  return best;
}

LayerString Layer::evaluate(const LayerString& previous) const {
  require(previous.size() == input_width, ErrorKind::shape_mismatch, "layer input has the wrong width");
  LayerString out(gates.size());
  for (std::size_t g = 0; g < gates.size(); ++g) out.set(g, gates[g].evaluate(previous));
  return out;
}

GapThresholds thresholds_for(const csp::GapSpec& gap) {
  auto c = gap.completeness;
  auto s = gap.soundness;
  auto third = (c - s) / 3;
  return {s + 2 * third, s + third, s, c, Rational(1) - third};
}

GapThresholds default_thresholds() { return thresholds_for(csp::GapSpec(Rational(9, 10), Rational(6, 10))); }

std::size_t width_at(std::size_t m, std::size_t layer) {
  if (layer >= 64) return 1;
  std::size_t div = std::size_t{1} << layer;
  return std::max<std::size_t>(1, (m + div - 1) / div);
}

std::size_t deterministic_depth(std::size_t m) {
  std::size_t d = 0;
  while ((std::size_t{1} << d) < m) ++d;
  return d;
}

std::size_t randomized_depth(std::size_t m) {
  std::size_t d = 0;
  // 2^(2^d) >= m  <=>  2^d >= log2 m.
  while ((std::size_t{1} << d) < deterministic_depth(m)) ++d;
  return d;
}

RobustCircuit::RobustCircuit(std::size_t m, Variant variant, Rational theta, std::vector<Layer> layers,
                             std::optional<std::uint64_t> seed, std::optional<std::size_t> fan_in)
    : m_(m), variant_(variant), theta_(theta), layers_(std::move(layers)), seed_(seed), fan_in_(fan_in) {
  require(theta_ > 0 && theta_ < 1, ErrorKind::invalid_argument, "threshold must lie in (0,1)");
  std::size_t width = m_;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& layer = layers_[i];
    require(layer.input_width == width, ErrorKind::malformed_instance,
            "layer " + std::to_string(i + 1) + " input width does not match the previous layer");
    require(!layer.gates.empty(), ErrorKind::malformed_instance, "layers must have gates");
    for (const auto& g : layer.gates) {
      require(!g.inputs.empty(), ErrorKind::malformed_instance, "gates need inputs");
      require(std::is_sorted(g.inputs.begin(), g.inputs.end()), ErrorKind::malformed_instance,
              "gate inputs must be sorted");
      require(g.inputs.back() < width, ErrorKind::malformed_instance, "gate input out of range");
    }
    width = layer.width();
  }
}

std::vector<std::size_t> RobustCircuit::widths() const {
  std::vector<std::size_t> out{m_};
  for (const auto& l : layers_) out.push_back(l.width());
  return out;
}

std::size_t RobustCircuit::total_gates() const {
  std::size_t total = 0;
  for (const auto& l : layers_) total += l.width();
  return total;
}

std::size_t RobustCircuit::max_fan_in() const {
  std::size_t best = 0;
  for (const auto& l : layers_) best = std::max(best, l.max_fan_in());
  return best;
}

std::vector<LayerString> RobustCircuit::evaluate(const LayerString& input) const {
  require(input.size() == m_, ErrorKind::shape_mismatch, "circuit input has the wrong width");
  std::vector<LayerString> out;
  out.reserve(layers_.size());
  const LayerString* prev = &input;
  for (const auto& l : layers_) {
    out.push_back(l.evaluate(*prev));
    prev = &out.back();
  }
  return out;
}

sampler::SamplerParams default_wiring_params() {
  sampler::SamplerParams p;
  p.epsilon = Rational(1, 10);
  p.delta = Rational(6, 10);
  p.gamma = Rational(8, 10);
  p.target_lambda = 0.45;
  p.model = sampler::GraphModel::simple;
  return p;
}

namespace {

Layer full_layer(std::size_t input_width, std::size_t width, const Rational& theta) {
  Layer layer;
  layer.input_width = input_width;
  layer.wiring = Wiring::full;
  ThresholdGate gate;
  gate.threshold = theta;
  for (std::size_t i = 0; i < input_width; ++i) gate.inputs.push_back(i);
  layer.gates.assign(width, gate);
  return layer;
}

}  // namespace

RobustCircuit build_deterministic(std::size_t m, const DeterministicOptions& options) {
  require(m >= 2, ErrorKind::invalid_argument, "deterministic circuits need m >= 2");
  require(options.cutoff >= 3, ErrorKind::invalid_argument, "degenerate cutoff must be at least 3");
  std::size_t d = deterministic_depth(m);
  std::vector<Layer> layers;
  for (std::size_t i = 1; i <= d; ++i) {
    std::size_t in = width_at(m, i - 1);
    std::size_t out = width_at(m, i);
    if (in <= options.cutoff) {
      layers.push_back(full_layer(in, out, options.theta));
      continue;
    }
    auto params = options.sampler;
    LayerOverride ov = i - 1 < options.overrides.size() ? options.overrides[i - 1] : LayerOverride{};
    params.min_degree = std::max(params.min_degree, ov.min_degree);
    auto fam = sampler::build_sampler_family(params, in, derive_seed(options.seed, 7919 * i + ov.salt),
                                             sampler::FamilyKind::halved, out);
    Layer layer;
    layer.input_width = in;
    layer.wiring = Wiring::sampler;
    layer.lambda = fam.lambda;
    for (auto& s : fam.sets) layer.gates.push_back({std::move(s), options.theta});
    layers.push_back(std::move(layer));
  }
  return RobustCircuit(m, Variant::deterministic, options.theta, std::move(layers), options.seed);
}

RobustCircuit build_randomized(std::size_t m, std::size_t fan_in, std::uint64_t seed, Rational theta) {
  require(m >= 4, ErrorKind::invalid_argument, "randomized circuits need m >= 4");
  require(fan_in >= 1, ErrorKind::invalid_argument, "fan-in must be positive");
  std::size_t d = randomized_depth(m);
  Rng rng(seed);
  std::vector<Layer> layers;
  for (std::size_t i = 1; i <= d; ++i) {
    Layer layer;
    layer.input_width = width_at(m, i - 1);
    layer.wiring = Wiring::random;
    std::size_t out = width_at(m, i);
    for (std::size_t g = 0; g < out; ++g) {
      ThresholdGate gate;
      gate.threshold = theta;
      for (std::size_t k = 0; k < fan_in; ++k) gate.inputs.push_back(uniform_index(rng, layer.input_width));
      std::sort(gate.inputs.begin(), gate.inputs.end());
      layer.gates.push_back(std::move(gate));
    }
    layers.push_back(std::move(layer));
  }
  return RobustCircuit(m, Variant::randomized, theta, std::move(layers), seed, fan_in);
}

std::string serialize_circuit(const RobustCircuit& c) {
  std::ostringstream os;
  os << "rcirc " << c.m() << ' ' << c.depth() << ' ' << to_string(c.variant()) << ' '
     << c.theta().numerator() << '/' << c.theta().denominator() << '\n';
  for (std::size_t i = 1; i <= c.depth(); ++i) {
    const auto& l = c.layer(i);
    os << "layer " << i << ' ' << l.input_width << ' ' << l.width() << ' ' << to_string(l.wiring) << '\n';
    for (const auto& g : l.gates) {
      for (std::size_t k = 0; k < g.inputs.size(); ++k) os << (k ? " " : "") << g.inputs[k];
      os << '\n';
    }
  }
  return os.str();
}

RobustCircuit parse_circuit(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };
  if (!next()) throw ParseError(ParseFailure::missing_header, 1, "no 'rcirc' line");
  std::istringstream hs(line);
  std::string tag, variant, theta;
  std::size_t m = 0, d = 0;
  if (!(hs >> tag >> m >> d >> variant >> theta) || tag != "rcirc" || (variant != "det" && variant != "rand")) {
    throw ParseError(ParseFailure::malformed_header, line_no, line);
  }
  Rational th;
  try {
    th = parse_rational(theta);
  } catch (const Error& e) {
    throw ParseError(ParseFailure::malformed_header, line_no, e.what());
  }
  std::vector<Layer> layers;
  std::size_t max_fan = 0;
  for (std::size_t i = 1; i <= d; ++i) {
    if (!next()) throw ParseError(ParseFailure::malformed_header, line_no, "missing layer " + std::to_string(i));
    std::istringstream ls(line);
    std::size_t index = 0, in_width = 0, width = 0;
    std::string wiring;
    if (!(ls >> tag >> index >> in_width >> width >> wiring) || tag != "layer" || index != i) {
      throw ParseError(ParseFailure::malformed_header, line_no, line);
    }
    Layer layer;
    layer.input_width = in_width;
    if (wiring == "sampler") {
      layer.wiring = Wiring::sampler;
    } else if (wiring == "full") {
      layer.wiring = Wiring::full;
    } else if (wiring == "random") {
      layer.wiring = Wiring::random;
    } else {
      throw ParseError(ParseFailure::malformed_header, line_no, "unknown wiring " + wiring);
    }
    for (std::size_t g = 0; g < width; ++g) {
      if (!next()) throw ParseError(ParseFailure::bad_token, line_no, "missing gate");
      std::istringstream gs(line);
      ThresholdGate gate;
      gate.threshold = th;
      long long v = 0;
      while (gs >> v) {
        if (v < 0 || static_cast<std::size_t>(v) >= in_width) {
          throw ParseError(ParseFailure::literal_out_of_range, line_no, "gate input out of range");
        }
        gate.inputs.push_back(static_cast<std::size_t>(v));
      }
      if (!gs.eof()) throw ParseError(ParseFailure::bad_token, line_no, line);
      if (gate.inputs.empty() || !std::is_sorted(gate.inputs.begin(), gate.inputs.end())) {
        throw ParseError(ParseFailure::bad_token, line_no, "gate inputs must be nonempty and sorted");
      }
      max_fan = std::max(max_fan, gate.inputs.size());
      layer.gates.push_back(std::move(gate));
    }
    layers.push_back(std::move(layer));
  }
  if (next()) throw ParseError(ParseFailure::bad_token, line_no, "trailing content");
  auto v = variant == "det" ? Variant::deterministic : Variant::randomized;
  std::optional<std::size_t> fan;
  if (v == Variant::randomized) fan = max_fan;
  try {
    return RobustCircuit(m, v, th, std::move(layers), std::nullopt, fan);
  } catch (const Error& e) {
    throw ParseError(ParseFailure::bad_token, line_no, e.what());
  }
}

}  // namespace gapforge::circuit
