#include "gapforge/circuit/certify.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "gapforge/error.hpp"
#include "gapforge/random.hpp"

namespace gapforge::circuit {

const char* to_string(CertMode mode) {
  switch (mode) {
    case CertMode::exhaustive: return "exhaustive";
    case CertMode::statistical: return "statistical";
    case CertMode::bound: return "bound";
  }
  return "unknown";
}

bool GoodnessCertificate::pass() const {
  return std::all_of(layers.begin(), layers.end(), [](const LayerGoodness& l) { return l.pass; });
}

bool CompletenessCertificate::pass() const {
  return std::all_of(layers.begin(), layers.end(), [](const LayerCompleteness& l) { return l.pass; });
}

bool CompletenessCertificate::exact() const {
  return std::none_of(layers.begin(), layers.end(),
                      [](const LayerCompleteness& l) { return l.mode == CertMode::statistical; });
}

namespace {

// Per-gate ones counts kept up to date under single-bit changes.
class GateCounts {
 public:
  explicit GateCounts(const Layer& layer) : layer_(layer), incidence_(layer.input_width), ones_(layer.width(), 0) {
    for (std::size_t g = 0; g < layer.width(); ++g) {
      for (auto i : layer.gates[g].inputs) incidence_[i].push_back(g);
    }
  }

  void load(const LayerString& x) {
    std::fill(ones_.begin(), ones_.end(), 0);
    for (std::size_t g = 0; g < layer_.width(); ++g) {
      for (auto i : layer_.gates[g].inputs) ones_[g] += x[i] ? 1 : 0;
    }
  }

  std::size_t fired() const {
    std::size_t total = 0;
    for (std::size_t g = 0; g < ones_.size(); ++g) total += layer_.gates[g].fires(ones_[g]) ? 1 : 0;
    return total;
  }

  // Applies the change and returns the score difference.
  template <class Score>
  double change(std::size_t input, bool to_one, const Score& score) {
    double delta = 0;
    for (auto g : incidence_[input]) {
      double before = score(g, ones_[g]);
      ones_[g] = to_one ? ones_[g] + 1 : ones_[g] - 1;
      delta += score(g, ones_[g]) - before;
    }
    return delta;
  }

  const std::vector<std::vector<std::size_t>>& incidence() const { return incidence_; }

 private:
  const Layer& layer_;
  std::vector<std::vector<std::size_t>> incidence_;
  std::vector<std::size_t> ones_;
};

// Swap hill climbing at a fixed number of ones; accepts non-worsening moves.
template <class Score>
LayerString climb(const Layer& layer, LayerString x, std::size_t steps, Rng& rng, const Score& score) {
  GateCounts counts(layer);
  counts.load(x);
  std::vector<std::size_t> ones, zeros;
  for (std::size_t i = 0; i < x.size(); ++i) (x[i] ? ones : zeros).push_back(i);
  if (ones.empty() || zeros.empty()) return x;
  for (std::size_t s = 0; s < steps; ++s) {
    auto oi = uniform_index(rng, ones.size());
    auto zi = uniform_index(rng, zeros.size());
    auto a = ones[oi];
    auto b = zeros[zi];
    double delta = counts.change(a, false, score) + counts.change(b, true, score);
    if (delta >= 0) {
      x.set(a, false);
      x.set(b, true);
      ones[oi] = b;
      zeros[zi] = a;
    } else {
      counts.change(b, false, score);
      counts.change(a, true, score);
    }
  }
  return x;
}

LayerString random_with_ones(std::size_t width, std::size_t ones, Rng& rng) {
  std::vector<std::size_t> order(width);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  LayerString x(width);
  for (std::size_t k = 0; k < ones; ++k) x.set(order[k], true);
  return x;
}

LayerString window_with_ones(std::size_t width, std::size_t ones, std::size_t offset) {
  LayerString x(width);
  for (std::size_t k = 0; k < ones; ++k) x.set((offset + k) % width, true);
  return x;
}

// Fills whole gate input sets with `value` in random gate order until the
// budget is spent, then spends the remainder at random.
LayerString gate_targeted(const Layer& layer, std::size_t budget, bool value, Rng& rng) {
  LayerString x(layer.input_width, !value);
  std::vector<std::size_t> order(layer.width());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t used = 0;
  for (auto g : order) {
    for (auto i : layer.gates[g].inputs) {
      if (used == budget) break;
      if (x[i] != value) {
        x.set(i, value);
        ++used;
      }
    }
  }
  for (std::size_t i = 0; used < budget && i < x.size(); ++i) {
    if (x[i] != value) {
      x.set(i, value);
      ++used;
    }
  }
  return x;
}

std::size_t fired_count(const Layer& layer, const LayerString& x) {
  std::size_t fired = 0;
  for (const auto& g : layer.gates) fired += g.evaluate(x) ? 1 : 0;
  return fired;
}

LayerGoodness exhaustive_goodness(const Layer& layer, LayerGoodness out) {
  std::size_t w = layer.input_width;
  // Multiset inputs become stacked masks, one per multiplicity level.
  std::vector<std::vector<std::uint64_t>> levels(layer.width());
  for (std::size_t g = 0; g < layer.width(); ++g) {
    const auto& in = layer.gates[g].inputs;
    for (std::size_t k = 0; k < in.size();) {
      std::size_t run = 1;
      while (k + run < in.size() && in[k + run] == in[k]) ++run;
      if (levels[g].size() < run) levels[g].resize(run, 0);
      for (std::size_t r = 0; r < run; ++r) levels[g][r] |= std::uint64_t{1} << in[k];
      k += run;
    }
  }
  std::uint64_t worst_mask = 0;
  bool have = false;
  auto visit = [&](std::uint64_t x) {
    std::size_t fired = 0;
    for (std::size_t g = 0; g < layer.width(); ++g) {
      std::size_t ones = 0;
      for (auto lv : levels[g]) ones += static_cast<std::size_t>(std::popcount(x & lv));
      fired += layer.gates[g].fires(ones) ? 1 : 0;
    }
    ++out.strings_checked;
    if (!have || fired > out.worst_output_ones) {
      out.worst_output_ones = fired;
      worst_mask = x;
      have = true;
    }
  };
  std::uint64_t limit = std::uint64_t{1} << w;
  for (std::size_t j = 0; j <= out.max_input_ones; ++j) {
    if (j == 0) {
      visit(0);
      continue;
    }
    // Gosper's hack over all masks with j bits.
    for (std::uint64_t x = (std::uint64_t{1} << j) - 1; x < limit;) {
      visit(x);
      std::uint64_t c = x & (~x + 1);
      std::uint64_t r = x + c;
      x = (((r ^ x) >> 2) / c) | r;
    }
  }
  out.worst_input = LayerString::from_mask(worst_mask, w);
  return out;
}

LayerGoodness statistical_goodness(const Layer& layer, LayerGoodness out, const GoodnessOptions& options) {
  std::size_t w = layer.input_width;
  std::size_t k = out.max_input_ones;
  std::size_t steps = options.search_steps != 0 ? options.search_steps : 20 * w;
  Rng rng(derive_seed(options.seed, out.layer));
  auto score = [&](std::size_t g, std::size_t ones) {
    const auto& gate = layer.gates[g];
    return gate.fires(ones) ? static_cast<double>(gate.inputs.size() + 1) : static_cast<double>(ones);
  };
  bool have = false;
  auto offer = [&](const LayerString& x) {
    auto fired = fired_count(layer, x);
    ++out.strings_checked;
    if (!have || fired > out.worst_output_ones) {
      out.worst_output_ones = fired;
      out.worst_input = x;
      have = true;
    }
  };
  std::size_t trials = std::max<std::size_t>(options.trials, 4);
  for (std::size_t t = 0; t < trials; ++t) {
    switch (t % 4) {
      case 0: offer(random_with_ones(w, k, rng)); break;
      case 1: offer(window_with_ones(w, k, uniform_index(rng, w))); break;
      case 2: offer(gate_targeted(layer, k, true, rng)); break;
      default: offer(climb(layer, gate_targeted(layer, k, true, rng), steps, rng, score)); break;
    }
  }
  return out;
}

}  // namespace

LayerGoodness certify_layer_goodness(const Layer& layer, std::size_t index, const GoodnessOptions& options) {
  LayerGoodness out;
  out.layer = index;
  out.input_width = layer.input_width;
  out.output_width = layer.width();
  out.max_input_ones = static_cast<std::size_t>(floor_times(options.mean_in, static_cast<std::int64_t>(layer.input_width)));
  out.allowed_output_ones = static_cast<std::size_t>(floor_times(options.mean_out, static_cast<std::int64_t>(layer.width())));
  if (layer.input_width <= std::min<std::size_t>(options.exhaustive_cap, 40)) {
    out.mode = CertMode::exhaustive;
    out = exhaustive_goodness(layer, out);
  } else {
    out.mode = CertMode::statistical;
    out = statistical_goodness(layer, out, options);
  }
  out.pass = out.worst_output_ones <= out.allowed_output_ones;
  return out;
}

GoodnessCertificate certify_goodness(const RobustCircuit& c, const GoodnessOptions& options) {
  GoodnessCertificate cert;
  cert.m = c.m();
  cert.widths = c.widths();
  cert.mean_in = options.mean_in;
  cert.mean_out = options.mean_out;
  cert.exhaustive_cap = options.exhaustive_cap;
  cert.trials = options.trials;
  cert.seed = options.seed;
  for (std::size_t i = 1; i <= c.depth(); ++i) cert.layers.push_back(certify_layer_goodness(c.layer(i), i, options));
  return cert;
}

std::size_t zero_budget(std::size_t width, std::size_t layer, const Rational& completeness) {
  Rational scale = Rational(1) - completeness;
  for (std::size_t i = 0; i < layer && scale != 0; ++i) scale /= 2;
  return static_cast<std::size_t>(floor_times(scale, static_cast<std::int64_t>(width)));
}

namespace {

std::uint64_t binomial_capped(std::size_t n, std::size_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double value = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    value = value * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (value > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(value + 0.5L);
}

std::size_t failing_gates(const Layer& layer, const LayerString& x) { return layer.width() - fired_count(layer, x); }

}  // namespace

CompletenessCertificate certify_completeness(const RobustCircuit& c, const CompletenessOptions& options) {
  CompletenessCertificate cert;
  cert.completeness = options.completeness;
  auto widths = c.widths();
  for (std::size_t i = 1; i <= c.depth(); ++i) {
    const auto& layer = c.layer(i);
    LayerCompleteness lc;
    lc.layer = i;
    lc.zeros_in = zero_budget(widths[i - 1], i - 1, options.completeness);
    lc.allowed_zeros_out = zero_budget(widths[i], i, options.completeness);
    std::size_t w = layer.input_width;
    lc.worst_input = LayerString(w, true);

    // Bound: no gate can see enough zeros to fail.
    bool bounded = true;
    for (const auto& g : layer.gates) {
      std::vector<std::size_t> mult;
      for (std::size_t k = 0; k < g.inputs.size();) {
        std::size_t run = 1;
        while (k + run < g.inputs.size() && g.inputs[k + run] == g.inputs[k]) ++run;
        mult.push_back(run);
        k += run;
      }
      std::sort(mult.rbegin(), mult.rend());
      std::size_t seen = 0;
      for (std::size_t k = 0; k < std::min(lc.zeros_in, mult.size()); ++k) seen += mult[k];
      if (!g.fires(g.inputs.size() - seen)) {
        bounded = false;
        break;
      }
    }
    if (bounded) {
      lc.mode = CertMode::bound;
      lc.worst_zeros_out = 0;
      lc.pass = true;
      cert.layers.push_back(std::move(lc));
      continue;
    }

    if (binomial_capped(w, lc.zeros_in, options.exhaustive_limit) <= options.exhaustive_limit) {
      lc.mode = CertMode::exhaustive;
      GateCounts counts(layer);
      std::vector<std::size_t> zeros_in(layer.width(), 0);
      std::vector<std::size_t> allowed(layer.width());
      for (std::size_t g = 0; g < layer.width(); ++g) {
        const auto& gate = layer.gates[g];
        std::size_t z = 0;
        while (z < gate.inputs.size() && gate.fires(gate.inputs.size() - z - 1)) ++z;
        allowed[g] = z;
      }
      std::vector<std::size_t> idx(lc.zeros_in);
      std::iota(idx.begin(), idx.end(), 0);
      while (true) {
        std::size_t failing = 0;
        for (auto z : idx) {
          for (auto g : counts.incidence()[z]) {
            if (++zeros_in[g] == allowed[g] + 1) ++failing;
          }
        }
        ++lc.strings_checked;
        if (failing > lc.worst_zeros_out || lc.strings_checked == 1) {
          lc.worst_zeros_out = failing;
          lc.worst_input = LayerString(w, true);
          for (auto z : idx) lc.worst_input.set(z, false);
        }
        for (auto z : idx) {
          for (auto g : counts.incidence()[z]) --zeros_in[g];
        }
        // Next combination in lexicographic order.
        std::size_t k = idx.size();
        while (k > 0 && idx[k - 1] == w - idx.size() + k - 1) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t j = k; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
      }
    } else {
      lc.mode = CertMode::statistical;
      Rng rng(derive_seed(options.seed, 1000 + i));
      std::size_t steps = options.search_steps != 0 ? options.search_steps : 20 * w;
      auto score = [&](std::size_t g, std::size_t ones) {
        const auto& gate = layer.gates[g];
        return gate.fires(ones) ? static_cast<double>(gate.inputs.size() - ones)
                                : static_cast<double>(gate.inputs.size() + 1);
      };
      std::size_t ones = w - lc.zeros_in;
      std::size_t trials = std::max<std::size_t>(options.trials, 4);
      for (std::size_t t = 0; t < trials; ++t) {
        LayerString x;
        switch (t % 4) {
          case 0: x = random_with_ones(w, ones, rng); break;
          case 1: x = window_with_ones(w, ones, uniform_index(rng, w)); break;
          case 2: x = gate_targeted(layer, lc.zeros_in, false, rng); break;
          default: x = climb(layer, gate_targeted(layer, lc.zeros_in, false, rng), steps, rng, score); break;
        }
        auto failing = failing_gates(layer, x);
        ++lc.strings_checked;
        if (failing > lc.worst_zeros_out || t == 0) {
          lc.worst_zeros_out = failing;
          lc.worst_input = x;
        }
      }
    }
    lc.pass = lc.worst_zeros_out <= lc.allowed_zeros_out;
    cert.layers.push_back(std::move(lc));
  }
  return cert;
}

CertifiedCircuit build_certified_deterministic(std::size_t m, DeterministicOptions options,
                                               const GoodnessOptions& goodness,
                                               const CompletenessOptions& completeness, std::size_t max_rounds) {
  std::size_t d = deterministic_depth(m);
  options.overrides.resize(std::max(options.overrides.size(), d));
  for (std::size_t round = 1; round <= max_rounds; ++round) {
    auto circuit = build_deterministic(m, options);
    CircuitCertificate cert{certify_goodness(circuit, goodness), certify_completeness(circuit, completeness)};
    if (cert.pass()) return {std::move(circuit), std::move(cert), round};
    for (std::size_t i = 1; i <= d; ++i) {
      bool ok = cert.goodness.layers[i - 1].pass && cert.completeness->layers[i - 1].pass;
      if (ok) continue;
      const auto& layer = circuit.layer(i);
      if (layer.wiring != Wiring::sampler) {
        std::ostringstream os;
        os << "full fan-in layer " << i << " fails certification at width " << layer.input_width;
        fail(ErrorKind::infeasible, os.str());
      }
      auto degree = layer.max_fan_in();
      if (degree + 1 >= layer.input_width) {
        std::ostringstream os;
        os << "layer " << i << " fails certification even at degree " << degree;
        fail(ErrorKind::infeasible, os.str());
      }
      auto& ov = options.overrides[i - 1];
      ov.min_degree = std::max(degree + 1, degree + degree / 4);
      ov.salt += 1;
    }
  }
  fail(ErrorKind::infeasible, "deterministic circuit not certified within " + std::to_string(max_rounds) + " rounds");
}

bool reaches_all_ones(const RobustCircuit& c, const LayerString& input) {
  auto layers = c.evaluate(input);
  return layers.empty() ? input.all() : layers.back().all();
}

std::vector<LayerString> completeness_inputs(std::size_t m, const Rational& completeness, std::size_t random_count,
                                             std::uint64_t seed) {
  auto zeros = static_cast<std::size_t>(floor_times(Rational(1) - completeness, static_cast<std::int64_t>(m)));
  std::vector<LayerString> out;
  LayerString prefix(m, true);
  for (std::size_t i = 0; i < zeros; ++i) prefix.set(i, false);
  out.push_back(prefix);
  LayerString spaced(m, true);
  for (std::size_t i = 0; i < zeros; ++i) spaced.set(i * m / zeros, false);
  if (zeros > 0) out.push_back(spaced);
  Rng rng(seed);
  std::vector<std::size_t> order(m);
  for (std::size_t r = 0; r < random_count; ++r) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    LayerString x(m, true);
    for (std::size_t i = 0; i < zeros; ++i) x.set(order[i], false);
    out.push_back(std::move(x));
  }
  return out;
}

FanInSearch tune_fan_in(std::size_t m, std::span<const LayerString> inputs, std::span<const std::uint64_t> seeds,
                        const GoodnessOptions& goodness, std::size_t max_fan_in, Rational theta) {
  FanInSearch search;
  for (std::size_t f = 1; f <= max_fan_in; ++f) {
    FanInTrial trial;
    trial.fan_in = f;
    trial.completeness = std::all_of(seeds.begin(), seeds.end(), [&](std::uint64_t seed) {
      auto c = build_randomized(m, f, seed, theta);
      return std::all_of(inputs.begin(), inputs.end(), [&](const LayerString& x) { return reaches_all_ones(c, x); });
    });
    if (trial.completeness) {
      trial.goodness = std::all_of(seeds.begin(), seeds.end(), [&](std::uint64_t seed) {
        return certify_goodness(build_randomized(m, f, seed, theta), goodness).pass();
      });
    }
    search.trials.push_back(trial);
    if (trial.completeness && trial.goodness) {
      search.fan_in = f;
      return search;
    }
  }
  fail(ErrorKind::infeasible, "no fan-in up to " + std::to_string(max_fan_in) + " passes certification");
}

}  // namespace gapforge::circuit
