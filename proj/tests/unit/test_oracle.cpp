#include <doctest.h>

#include <array>
#include <cmath>

#include "gapforge/circuit/certify.hpp"
#include "gapforge/csp/generate.hpp"
#include "gapforge/csp/three_sat.hpp"
#include "gapforge/error.hpp"
#include "gapforge/oracle/brute_force.hpp"
#include "gapforge/oracle/layer_check.hpp"
#include "gapforge/oracle/sat_decider.hpp"
#include "gapforge/oracle/stats.hpp"
#include "support.hpp"

using namespace gapforge;
using namespace gapforge::oracle;

namespace {

circuit::Layer identity_layer(std::size_t w) {
  circuit::Layer layer;
  layer.input_width = w;
  layer.wiring = circuit::Wiring::sampler;
  for (std::size_t g = 0; g < w; ++g) layer.gates.push_back({{g}, Rational(4, 5)});
  return layer;
}

circuit::Layer full_layer(std::size_t w, std::size_t gates) {
  circuit::Layer layer;
  layer.input_width = w;
  std::vector<std::size_t> all(w);
  for (std::size_t i = 0; i < w; ++i) all[i] = i;
  for (std::size_t g = 0; g < gates; ++g) layer.gates.push_back({all, Rational(4, 5)});
  return layer;
}

}  // namespace

TEST_CASE("brute force optimum") {
  std::array<std::array<std::size_t, 3>, 1> triple{{{0, 1, 2}}};
  auto block = csp::sign_pattern_blocks(3, triple);
  auto r = brute_force_opt(block);
  CHECK(r.optimum == Rational(7, 8));
  CHECK(r.enumerated == 8);
  CHECK(r.argmax.to_mask() == 0);

  csp::Literal lit{1, true};
  csp::CspInstance single(2, {csp::Clause::disjunction(std::span(&lit, 1))});
  CHECK(brute_force_opt(single).optimum == 1);

  CHECK(brute_force_opt(csp::CspInstance(0, {})).degenerate);
  CHECK_THROWS_AS(brute_force_opt(csp::random_ksat(10, 5, 3, 1), {8, 1}), Error);
}

TEST_CASE("brute force agrees with naive recomputation and across job counts") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto inst = support::random_tables(4 + seed % 9, 20, 0.5, seed);
    auto serial = brute_force_opt(inst);
    CHECK(serial.optimum == support::naive_optimum(inst));
    CHECK(csp::satisfied_fraction(inst, serial.argmax).value == serial.optimum);
    auto parallel = brute_force_opt(inst, {24, 3});
    CHECK(parallel.optimum == serial.optimum);
    CHECK(parallel.argmax == serial.argmax);
  }
}

TEST_CASE("exhaustive layer check") {
  SUBCASE("identity wiring fails at mean 7/10") {
    auto r = exhaustive_layer_check(identity_layer(10), Rational(7, 10), Rational(6, 10));
    CHECK_FALSE(r.pass);
    CHECK(r.witness.count() == 7);
    CHECK(r.worst_output_ones == 7);
    CHECK(r.allowed_output_ones == 6);
  }
  SUBCASE("full fan-in threshold layer passes") {
    auto r = exhaustive_layer_check(full_layer(10, 5), Rational(7, 10), Rational(6, 10));
    CHECK(r.pass);
    CHECK(r.worst_output_ones == 0);
    CHECK(r.strings_checked == 968);
  }
  SUBCASE("agrees with certify_layer_goodness and a naive scan") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      auto c = circuit::build_randomized(16, 3 + seed % 5, seed);
      for (const auto& layer : c.layers()) {
        auto r = exhaustive_layer_check(layer, Rational(7, 10), Rational(6, 10));
        circuit::GoodnessOptions opts;
        auto g = circuit::certify_layer_goodness(layer, 1, opts);
        CHECK(g.mode == circuit::CertMode::exhaustive);
        CHECK(g.pass == r.pass);
        CHECK(g.worst_output_ones == r.worst_output_ones);
        CHECK(r.worst_output_ones == support::naive_worst_output(layer, r.max_input_ones));
      }
    }
  }
  SUBCASE("width cap") { CHECK_THROWS_AS(exhaustive_layer_check(identity_layer(24), Rational(7, 10), Rational(6, 10)), Error); }
}

TEST_CASE("chernoff tails") {
  CHECK(chernoff_tail(ChernoffForm::upper, Rational(1, 2), Rational(1), 12) == doctest::Approx(std::exp(-2.0)));
  CHECK(chernoff_tail(ChernoffForm::upper, Rational(1, 2), Rational(1, 1000000), 12) == doctest::Approx(1.0).epsilon(1e-6));
  double prev = 1.0;
  for (std::size_t n = 1; n < 50; ++n) {
    double v = chernoff_tail(ChernoffForm::lower, Rational(1, 3), Rational(1, 2), n);
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(chernoff_tail(ChernoffForm::lower, Rational(1, 3), Rational(2), 5), Error);
  CHECK_THROWS_AS(chernoff_tail(ChernoffForm::upper_large, Rational(1, 3), Rational(1), 5), Error);
}

TEST_CASE("local lemma condition") {
  auto zero = lll_condition(0.0, 4);
  CHECK(zero.value == 0.0);
  CHECK(zero.holds);
  auto edge = lll_condition(1.0 / (std::exp(1.0) * 8.0), 7);
  CHECK(edge.value == doctest::Approx(1.0));
  CHECK(edge.holds);
  auto big = lll_condition(0.5, 10);
  CHECK(big.value == doctest::Approx(14.95).epsilon(1e-3));
  CHECK_FALSE(big.holds);
}

TEST_CASE("seeded estimates") {
  auto yes = estimate([](std::uint64_t) { return true; }, 100, 1);
  CHECK(yes.frequency == 1.0);
  CHECK(yes.interval.high == doctest::Approx(1.0));
  auto no = estimate([](std::uint64_t) { return false; }, 100, 1);
  CHECK(no.frequency == 0.0);
  auto coin = [](std::uint64_t seed) { return (seed >> 17) & 1U; };
  auto fair = estimate(coin, 10000, 7);
  CHECK(fair.interval.low <= 0.5);
  CHECK(fair.interval.high >= 0.5);
  auto threaded = estimate(coin, 10000, 7, 4);
  CHECK(threaded.successes == fair.successes);
}

TEST_CASE("propagation decider") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto inst = csp::random_ksat(8, 30 + seed, 3, seed);
    auto expanded = csp::csp_to_3sat(inst);
    auto r = propagate_decide(expanded.instance, expanded.primary_vars);
    CHECK(r.satisfiable == (support::naive_optimum(inst) == 1));
    if (r.witness) CHECK(csp::satisfied_fraction(expanded.instance, *r.witness).satisfied == expanded.instance.clause_count());
  }
}
