#include <doctest.h>

#include <array>

#include "gapforge/csp/generate.hpp"
#include "gapforge/csp/io.hpp"
#include "gapforge/error.hpp"
#include "gapforge/gap_eth/reduction.hpp"
#include "gapforge/oracle/brute_force.hpp"
#include "gapforge/random.hpp"
#include "gapforge/sampler/sampler.hpp"
#include "support.hpp"

using namespace gapforge;
using namespace gapforge::gap_eth;

namespace {

csp::CspInstance no_base() {
  std::array<std::array<std::size_t, 3>, 2> triples{{{0, 1, 2}, {1, 2, 3}}};
  return csp::sign_pattern_blocks(4, triples);
}

ReductionParams desk_params() {
  ReductionParams p;
  p.s = Rational(7, 8);
  p.epsilon = Rational(1, 7);
  p.k = 128;
  p.t = 16;
  return p;
}

const sampler::SamplerFamily& desk_family() {
  static const sampler::SamplerFamily fam = [] {
    auto sp = one_sided_sampler_params(desk_params());
    sp.target_lambda = sampler::chebyshev_lambda(sp.epsilon, sp.delta);
    return sampler::build_sampler_family(sp, 256, 12, sampler::FamilyKind::full);
  }();
  return fam;
}

}  // namespace

TEST_CASE("parameters") {
  auto p = desk_params();
  CHECK(p.threshold() == Rational(15, 16));
  CHECK(p.k_condition() == Rational(1, 2));
  p.normalize = true;
  CHECK(p.effective_epsilon() == Rational(1, 101));
  ReductionParams bad;
  bad.epsilon = Rational(3, 2);
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK(clause_density(no_base()) == Rational(4));
  CHECK(trial_budget(5, 128) == 26);
  CHECK(trial_budget(0, 4) == 0);
}

TEST_CASE("list sampling") {
  auto base = no_base();
  auto p = desk_params();
  auto a = sample_list(base, p);
  CHECK(a.entries.size() == 256);
  CHECK(a.entries == sample_list(base, p).entries);
  p.seed = 2;
  CHECK_FALSE(a.entries == sample_list(base, p).entries);
  auto repeated = sample_list(base, p, ListMode::repeated);
  for (auto c : repeated.counts()) CHECK(c == 16);
  CHECK(check_balanced(repeated, p).balanced);
}

TEST_CASE("balance verdicts") {
  ReductionParams p;
  p.s = Rational(1, 2);
  p.epsilon = Rational(1, 4);
  ClauseList uniform{8, {}, ListMode::repeated};
  for (int r = 0; r < 4; ++r) {
    for (std::size_t j = 0; j < 8; ++j) uniform.entries.push_back(j);
  }
  auto v = check_balanced(uniform, p);
  CHECK(v.balanced);
  CHECK(v.top_size == 4);
  CHECK(v.bottom_size == 5);
  CHECK_FALSE(v.top_rounded);
  CHECK_FALSE(v.bottom_rounded);

  ClauseList single{8, std::vector<std::size_t>(32, 3), ListMode::sampled};
  auto w = check_balanced(single, p);
  CHECK_FALSE(w.condition1);
  CHECK_FALSE(w.balanced);
  CHECK(std::find(w.top_witness.begin(), w.top_witness.end(), 3) != w.top_witness.end());

  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    p.seed = seed;
    p.t = 4;
    auto base = csp::random_ksat(4, 12, 3, seed);
    auto list = sample_list(base, p);
    auto verdict = check_balanced(list, p);
    auto counts = list.counts();
    CHECK(verdict.top_sum == support::subset_extremum(counts, verdict.top_size, true));
    CHECK(verdict.bottom_sum == support::subset_extremum(counts, verdict.bottom_size, false));
  }
}

TEST_CASE("threshold clauses") {
  auto base = csp::planted_3sat(6, 10, 4);
  auto opt = oracle::brute_force_opt(base);
  std::vector<std::size_t> picks{0, 3, 3, 7};
  auto clause = threshold_clause(base, picks, Rational(3, 4));
  for (std::uint64_t x = 0; x < 64; ++x) {
    std::int64_t ones = 0;
    for (auto j : picks) ones += base.clause(j).evaluate_mask(x) ? 1 : 0;
    CHECK(clause.evaluate_mask(x) == (4 * ones >= 3 * 4));
  }
  CHECK(clause.evaluate(opt.argmax));
  CHECK_THROWS_AS(threshold_clause(base, picks, Rational(1, 2), 2), Error);
}

TEST_CASE("two-sided reduction") {
  ReductionParams p;
  p.k = 4;
  auto base = csp::planted_3sat(6, 18, 2);
  auto opt = oracle::brute_force_opt(base);
  auto out = reduce_two_sided(base, p);
  CHECK(out.instance.clause_count() == 6);
  CHECK(out.samples.size() == 6);
  for (const auto& s : out.samples) CHECK(s.size() == 4);
  CHECK(csp::satisfied_fraction(out.instance, opt.argmax).value == 1);
  CHECK(csp::serialize_native(out.instance) == csp::serialize_native(reduce_two_sided(base, p).instance));

  std::vector<csp::Clause> falses(6, csp::Clause::constant(false));
  csp::CspInstance dead(4, std::move(falses));
  CHECK(oracle::brute_force_opt(reduce_two_sided(dead, p).instance).optimum == 0);
}

TEST_CASE("one-sided reduction") {
  auto p = desk_params();
  const auto& fam = desk_family();
  CHECK(fam.sets.size() == 256);

  SUBCASE("unbalanced lists give the canonical instance") {
    bool seen = false;
    for (std::uint64_t seed = 1; seed <= 20 && !seen; ++seed) {
      p.seed = seed;
      auto out = reduce_one_sided(no_base(), p, fam);
      if (out.report.verdict.balanced) continue;
      seen = true;
      CHECK(out.report.canonical);
      CHECK(out.instance == canonical_no_instance());
      CHECK(oracle::brute_force_opt(out.instance).optimum == Rational(1, 2));
    }
    CHECK(seen);
  }
  SUBCASE("satisfiable base satisfies every threshold clause") {
    auto base = csp::planted_3sat(5, 16, 3);
    auto opt = oracle::brute_force_opt(base);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      p.seed = seed;
      auto out = reduce_one_sided(base, p, fam);
      if (!out.report.verdict.balanced) continue;
      CHECK(csp::satisfied_fraction(out.instance, opt.argmax).value == 1);
    }
  }
  SUBCASE("report") {
    auto out = reduce_one_sided(no_base(), p, fam);
    CHECK(out.report.k_condition_holds);
    CHECK(out.report.threshold == Rational(15, 16));
    CHECK(out.report.set_size == fam.degree);
    CHECK(out.report.intersection_degree <= fam.degree * fam.degree);
    CHECK(out.report.lll.value > 0.0);
    CHECK(out.report.failure_estimate > 0.0);
    CHECK(out.report.failure_estimate <= 1.0);
  }
  SUBCASE("threshold optimum matches materialized brute force") {
    std::size_t compared = 0;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      p.seed = seed;
      for (const auto& base : {no_base(), csp::planted_3sat(5, 16, seed)}) {
        auto out = reduce_one_sided(base, p, fam);
        if (!out.report.verdict.balanced) continue;
        ++compared;
        CHECK(threshold_optimum(base, out.list, fam, p.threshold()) == oracle::brute_force_opt(out.instance).optimum);
      }
    }
    CHECK(compared > 0);
  }
  SUBCASE("size mismatch") {
    p.t = 8;
    CHECK_THROWS_AS(reduce_one_sided(no_base(), p, fam), Error);
  }
}

TEST_CASE("driver") {
  auto p = desk_params();
  DriverOptions opts;
  opts.family = &desk_family();
  opts.decider = propagation_decider();

  auto none = solve_driver(no_base(), p, 0, opts);
  CHECK_FALSE(none.yes);
  CHECK(none.trials.empty());

  auto no = solve_driver(no_base(), p, 8, opts);
  CHECK_FALSE(no.yes);
  CHECK(no.trials.size() == 8);

  auto base = csp::planted_3sat(5, 16, 3);
  opts.stop_at_first_yes = true;
  auto serial = solve_driver(base, p, trial_budget(5, p.k), opts);
  CHECK(serial.yes);
  opts.jobs = 3;
  auto threaded = solve_driver(base, p, trial_budget(5, p.k), opts);
  CHECK(threaded.first_yes == serial.first_yes);
  CHECK(threaded.trials.size() == serial.trials.size());

  opts.decider = [](const csp::ThreeSatExpansion&) -> bool { throw std::runtime_error("solver crashed"); };
  try {
    solve_driver(base, p, 3, opts);
    FAIL("decider failure swallowed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::subroutine_failure);
    CHECK(std::string(e.what()).find("trial 0") != std::string::npos);
  }
}

TEST_CASE("unbalanced rate falls as the list grows") {
  auto base = csp::random_ksat(12, 48, 3, 21);
  ReductionParams p;
  auto unbalanced = [&](std::size_t t) {
    p.t = t;
    std::size_t count = 0;
    for (std::uint64_t i = 0; i < 400; ++i) {
      p.seed = derive_seed(5, i);
      count += check_balanced(sample_list(base, p), p).balanced ? 0 : 1;
    }
    return count;
  };
  auto small = unbalanced(4);
  auto large = unbalanced(64);
  CHECK(small > 0);
  CHECK(large < small);
}

TEST_CASE("two-sided false positives fall as k grows") {
  auto base = support::random_tables(10, 40, 0.3, 3);
  REQUIRE(oracle::brute_force_opt(base).optimum <= Rational(1, 2));
  ReductionParams p;
  p.s = Rational(1, 2);
  p.epsilon = Rational(1, 4);
  auto false_yes = [&](std::size_t k) {
    p.k = k;
    std::size_t count = 0;
    for (std::uint64_t i = 0; i < 300; ++i) {
      p.seed = derive_seed(6, i);
      count += oracle::brute_force_opt(reduce_two_sided(base, p).instance).optimum > Rational(1, 2) ? 1 : 0;
    }
    return count;
  };
  auto few = false_yes(1);
  auto many = false_yes(8);
  CHECK(few > 0);
  CHECK(many < few);
}
