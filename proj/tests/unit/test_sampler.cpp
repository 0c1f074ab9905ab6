#include <doctest.h>

#include <algorithm>

#include "gapforge/circuit/circuit.hpp"
#include "gapforge/error.hpp"
#include "gapforge/random.hpp"
#include "gapforge/sampler/graph.hpp"
#include "gapforge/sampler/sampler.hpp"
#include "support.hpp"

using namespace gapforge;
using namespace gapforge::sampler;

namespace {

void check_regular(const RegularGraph& g) {
  for (std::size_t v = 0; v < g.size(); ++v) {
    REQUIRE(g.neighbors(v).size() == g.degree());
    for (auto u : g.neighbors(v)) {
      CHECK(std::count(g.neighbors(v).begin(), g.neighbors(v).end(), u) ==
            std::count(g.neighbors(u).begin(), g.neighbors(u).end(), v));
    }
  }
}

}  // namespace

TEST_CASE("expander construction") {
  for (auto model : {GraphModel::configuration, GraphModel::simple}) {
    auto k4 = build_expander(4, 3, 5, {model, 200});
    check_regular(k4);
    CHECK(k4.connected());
    auto a = build_expander(64, 5, 9, {model, 200});
    auto b = build_expander(64, 5, 9, {model, 200});
    CHECK(a == b);
    check_regular(a);
  }
  CHECK(build_expander(40, 4, 3, {GraphModel::simple, 200}).simple());
  CHECK_THROWS_AS(build_expander(5, 3, 1), Error);
}

TEST_CASE("small random cubic graphs expand") {
  std::size_t good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto g = build_expander(6, 3, seed);
    good += support::dense_lambda(g) < 0.95 ? 1 : 0;
  }
  CHECK(good >= 90);
}

TEST_CASE("second eigenvalue") {
  for (std::size_t d = 2; d <= 9; ++d) CHECK(second_eigenvalue(complete_graph(d + 1)) == doctest::Approx(1.0 / static_cast<double>(d)).epsilon(1e-9));
  auto split = disjoint_union(complete_graph(5), complete_graph(5));
  CHECK(second_eigenvalue(split) == doctest::Approx(1.0).epsilon(1e-9));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (std::size_t n : {16, 32, 64}) {
      for (auto model : {GraphModel::configuration, GraphModel::simple}) {
        auto g = build_expander(n, 3 + seed % 5, seed, {model, 200});
        CHECK(std::abs(second_eigenvalue(g) - support::dense_lambda(g)) <= 1e-6);
      }
    }
  }
}

TEST_CASE("sampler families") {
  auto params = circuit::default_wiring_params();
  auto fam = build_sampler_family(params, 64, 3);
  CHECK(fam.sets.size() == 32);
  CHECK(fam.set_size() == fam.degree);
  REQUIRE(fam.lambda);
  CHECK(*fam.lambda <= params.target_lambda);
  CHECK(max_intersection_degree(fam) <= fam.degree * fam.degree);
  for (const auto& set : fam.sets) CHECK(std::is_sorted(set.begin(), set.end()));

  auto full = build_sampler_family(params, 64, 3, FamilyKind::full);
  CHECK(full.sets.size() == 64);
  CHECK(full.degree == fam.degree);
  CHECK(std::equal(fam.sets.begin(), fam.sets.end(), full.sets.begin()));

  auto again = build_sampler_family(params, 64, 3);
  CHECK(serialize_family(again) == serialize_family(fam));
  CHECK(serialize_family(parse_family(serialize_family(fam))) == serialize_family(fam));
}

TEST_CASE("certify_sampler on constant strings") {
  auto fam = build_sampler_family(circuit::default_wiring_params(), 128, 11);
  std::vector<BitString> corpus{BitString(128, true), BitString(128, false)};
  auto report = certify_sampler(fam, corpus);
  REQUIRE(report.strings.size() == 2);
  CHECK(report.strings[0].mean == 1);
  CHECK(report.strings[0].deviation_fraction == 0);
  CHECK(report.strings[1].deviation_fraction == 0);
  CHECK(report.strings[0].eta == Rational(0));
  CHECK(report.strings[0].low_fraction == Rational(0));
  CHECK_FALSE(report.strings[1].eta);
  CHECK(report.pass());
}

TEST_CASE("adversarial corpus respects the mixing bound") {
  auto params = circuit::default_wiring_params();
  for (std::size_t n : {128, 256}) {
    auto fam = build_sampler_family(params, n, 5);
    auto corpus = adversarial_corpus(fam, {.seed = 2});
    auto report = certify_sampler(fam, corpus);
    CHECK(report.property1_pass);
    CHECK(report.mixing_pass);
    auto threaded = certify_sampler(fam, corpus, 3);
    CHECK(threaded.worst_deviation == report.worst_deviation);
  }
}

TEST_CASE("mixing bound") {
  CHECK(mixing_bound(0.1, 0.8, 0.04) == doctest::Approx(0.04));
  CHECK(mixing_bound(1e-9, 0.8, 0.04) == doctest::Approx(0.0));
}

TEST_CASE("parameter validation") {
  SamplerParams bad;
  bad.epsilon = Rational(0);
  bad.delta = Rational(1, 2);
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(parse_family("sampler 4\n"), Error);
}
