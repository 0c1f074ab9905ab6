#include <doctest.h>

#include <algorithm>
#include <map>

#include "gapforge/circuit/certify.hpp"
#include "gapforge/csp/generate.hpp"
#include "gapforge/error.hpp"
#include "gapforge/oracle/brute_force.hpp"
#include "gapforge/pcp/transform.hpp"
#include "gapforge/random.hpp"
#include "support.hpp"

using namespace gapforge;
using namespace gapforge::pcp;

namespace {

const circuit::CertifiedCircuit& certified(std::size_t m) {
  static std::map<std::size_t, circuit::CertifiedCircuit> cache;
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, circuit::build_certified_deterministic(m, {})).first;
  return it->second;
}

TransformedSystem make(csp::CspInstance base) {
  const auto& cc = certified(base.clause_count());
  return transform(std::move(base), cc.circuit, cc.certificate);
}

}  // namespace

TEST_CASE("proof length and accounting") {
  auto ts = make(csp::random_ksat(10, 16, 3, 1));
  const auto& acc = ts.accounting();
  CHECK(ts.proof_length() == 41);
  CHECK(acc.layer_bits == 31);
  CHECK(acc.randomness_bits == 4);
  CHECK(acc.random_strings == 16);
  CHECK(acc.depth == 4);
  CHECK(acc.extra_query_bound == acc.max_fan_in * 4 + 5);
  CHECK(acc.query_bound == 3 + acc.extra_query_bound);
  CHECK(acc.max_distinct_queries <= acc.query_bound);
  CHECK(acc.max_nominal_queries <= acc.query_bound);
  CHECK(acc.max_distinct_queries <= acc.max_nominal_queries);
  for (std::size_t j = 0; j < 16; ++j) {
    auto ref = ts.check(j);
    REQUIRE(ref.gates.size() == 4);
    for (std::size_t i = 1; i <= 4; ++i) CHECK(ref.gates[i - 1] == j % circuit::width_at(16, i));
  }
}

TEST_CASE("transform contract") {
  const auto& cc = certified(16);
  CHECK_THROWS_AS(transform(csp::random_ksat(6, 8, 3, 1), cc.circuit, cc.certificate), Error);
  try {
    transform(csp::random_ksat(6, 16, 3, 1), cc.circuit, std::nullopt);
    FAIL("missing certificate accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::certificate);
  }
  auto waived = transform(csp::random_ksat(6, 16, 3, 1), cc.circuit, std::nullopt, true);
  CHECK(waived.waived());
  auto bad = cc.certificate;
  bad.goodness.layers[0].pass = false;
  CHECK_THROWS_AS(transform(csp::random_ksat(6, 16, 3, 1), cc.circuit, bad), Error);
}

TEST_CASE("honest proofs") {
  auto base = csp::planted_3sat(8, 16, 2);
  auto opt = oracle::brute_force_opt(base);
  REQUIRE(opt.optimum == 1);
  auto ts = make(base);
  auto proof = honest_proof(ts, opt.argmax);
  for (const auto& layer : proof.layers) CHECK(layer.all());
  for (std::size_t j = 0; j < 16; ++j) CHECK(run_check(ts, j, proof).accept);
  CHECK(acceptance_probability(ts, proof) == 1);
  CHECK(ts.unflatten(ts.flatten(proof)) == proof);

  auto near = support::near_satisfiable(9, 16, 1, 3);
  auto near_opt = oracle::brute_force_opt(near);
  REQUIRE(near_opt.optimum == Rational(15, 16));
  auto near_ts = make(near);
  CHECK(honest_proof(near_ts, near_opt.argmax).layers.back().all());
  CHECK(acceptance_probability(near_ts, honest_proof(near_ts, near_opt.argmax)) == 1);

  auto low = support::unit_pairs(8, 8);
  auto low_ts = make(low);
  for (std::uint64_t x = 0; x < 256; x += 17) {
    CHECK_FALSE(honest_proof(low_ts, BitString::from_mask(x, 8)).layers.back()[0]);
  }
}

TEST_CASE("check rejections") {
  auto base = csp::planted_3sat(8, 16, 5);
  auto ts = make(base);
  auto proof = honest_proof(ts, oracle::brute_force_opt(base).argmax);

  auto top_zero = proof;
  top_zero.layers.back().set(0, false);
  for (std::size_t j = 0; j < 16; ++j) CHECK_FALSE(run_check(ts, j, top_zero).accept);

  for (std::size_t g = 0; g < 8; ++g) {
    auto broken = proof;
    broken.layers[1].flip(g);
    for (std::size_t j = 0; j < 16; ++j) CHECK(run_check(ts, j, broken).accept == (j % 8 != g));
    CHECK(acceptance_probability(ts, broken) == Rational(14, 16));
  }

  auto zeros = ts.unflatten(BitString(ts.proof_length()));
  CHECK(acceptance_probability(ts, zeros) < 1);
}

TEST_CASE("transcripts follow the declared reads") {
  auto ts = make(csp::random_ksat(10, 16, 3, 9));
  auto proof = honest_proof(ts, BitString(10, true));
  for (std::size_t j = 0; j < 16; ++j) {
    auto reads = ts.reads(j);
    auto result = run_check(ts, j, proof);
    CHECK(result.nominal_queries == reads.size());
    std::vector<std::size_t> distinct;
    for (auto r : reads) {
      if (std::find(distinct.begin(), distinct.end(), r) == distinct.end()) distinct.push_back(r);
    }
    CHECK(result.transcript == distinct);
    CHECK(ts.accepts(j, ts.flatten(proof)) == result.accept);
  }
}

TEST_CASE("exhaustive adversary") {
  SUBCASE("satisfiable base reaches one") {
    auto base = csp::planted_3sat(4, 4, 1);
    auto ts = make(base);
    auto r = exhaustive_adversary(ts);
    CHECK(r.acceptance == 1);
    CHECK(acceptance_probability(ts, r.proof) == 1);
  }
  SUBCASE("matches naive enumeration on tiny systems") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      auto base = support::random_tables(4, 4, 0.5, seed);
      auto ts = make(base);
      REQUIRE(ts.proof_length() <= 12);
      auto r = exhaustive_adversary(ts);
      CHECK(r.acceptance == support::naive_max_acceptance(ts));
      CHECK(acceptance_probability(ts, r.proof) == r.acceptance);
      auto threaded = exhaustive_adversary(ts, 24, 3);
      CHECK(threaded.acceptance == r.acceptance);
      CHECK(threaded.proof == r.proof);
    }
  }
  SUBCASE("low-satisfiability base stays below nine tenths") {
    auto base = support::unit_pairs(6, 4);
    REQUIRE(oracle::brute_force_opt(base).optimum == Rational(1, 2));
    auto ts = make(base);
    CHECK(exhaustive_adversary(ts).acceptance <= Rational(9, 10));
  }
  SUBCASE("cap") {
    auto ts = make(csp::random_ksat(12, 16, 3, 1));
    CHECK_THROWS_AS(exhaustive_adversary(ts, 24), Error);
  }
}

TEST_CASE("greedy adversary") {
  auto base = support::unit_pairs(6, 4);
  auto ts = make(base);
  auto exact = exhaustive_adversary(ts);
  auto greedy = greedy_adversary(ts, 20, 3);
  CHECK(greedy.acceptance <= exact.acceptance);
  CHECK(greedy.acceptance <= Rational(9, 10));
  CHECK(acceptance_probability(ts, greedy.proof) == greedy.acceptance);
  auto again = greedy_adversary(ts, 20, 3);
  CHECK(again.acceptance == greedy.acceptance);
  CHECK(again.proof == greedy.proof);
}

TEST_CASE("exported checks agree with the verifier") {
  auto ts = make(csp::random_ksat(6, 8, 3, 4));
  auto exported = export_checks(ts);
  CHECK(exported.num_vars() == ts.proof_length());
  CHECK(exported.clause_count() == 8);
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    BitString flat(ts.proof_length());
    for (std::size_t b = 0; b < flat.size(); ++b) flat.set(b, rng() & 1U);
    for (std::size_t j = 0; j < 8; ++j) CHECK(evaluate_clause(exported.clause(j), flat) == ts.accepts(j, flat));
  }
}
