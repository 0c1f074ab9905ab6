#include "gapforge/gap_eth/reduction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "gapforge/error.hpp"
#include "gapforge/oracle/sat_decider.hpp"
#include "gapforge/parallel.hpp"
#include "gapforge/random.hpp"

namespace gapforge::gap_eth {

namespace {

Rational capped_at_one(const Rational& r) { return r > Rational(1) ? Rational(1) : r; }

bool integral(const Rational& r) { return r.denominator() == 1; }

}  // namespace

void ReductionParams::validate() const {
  require(s > Rational(0) && s <= Rational(1), ErrorKind::invalid_argument, "s must lie in (0, 1]");
  require(epsilon > Rational(0) && epsilon < Rational(1), ErrorKind::invalid_argument,
          "epsilon must lie in (0, 1)");
  require(k > 0, ErrorKind::invalid_argument, "k must be positive");
  require(t > 0, ErrorKind::invalid_argument, "t must be positive");
}

Rational ReductionParams::effective_epsilon() const {
  if (normalize && epsilon >= Rational(1, 100)) return Rational(1, 101);
  return epsilon;
}

Rational ReductionParams::threshold() const { return s * (Rational(1) + effective_epsilon() / 2); }

Rational ReductionParams::k_condition() const {
  auto e = effective_epsilon();
  return Rational(1) / (s * s * e * e * static_cast<std::int64_t>(k));
}

Rational clause_density(const csp::CspInstance& base) {
  require(base.num_vars() > 0, ErrorKind::invalid_argument, "density needs at least one variable");
  return Rational(static_cast<std::int64_t>(base.clause_count()), static_cast<std::int64_t>(base.num_vars()));
}

std::vector<std::size_t> ClauseList::counts() const {
  std::vector<std::size_t> c(base_clauses, 0);
  for (auto e : entries) ++c[e];
  return c;
}

ClauseList sample_list(const csp::CspInstance& base, const ReductionParams& params, ListMode mode) {
  params.validate();
  std::size_t m = base.clause_count();
  require(m > 0, ErrorKind::invalid_argument, "cannot sample a list from an instance without clauses");
  ClauseList list;
  list.base_clauses = m;
  list.mode = mode;
  list.entries.reserve(params.t * m);
  if (mode == ListMode::repeated) {
    for (std::size_t r = 0; r < params.t; ++r) {
      for (std::size_t j = 0; j < m; ++j) list.entries.push_back(j);
    }
    return list;
  }
  Rng rng(params.seed);
  for (std::size_t p = 0; p < params.t * m; ++p) list.entries.push_back(uniform_index(rng, m));
  return list;
}

BalanceVerdict check_balanced(const ClauseList& list, const ReductionParams& params) {
  params.validate();
  std::size_t m = list.base_clauses;
  require(m > 0, ErrorKind::invalid_argument, "list has no base clauses");
  auto counts = list.counts();
  auto e = params.effective_epsilon();
  auto total = static_cast<std::int64_t>(list.entries.size());
  auto mm = static_cast<std::int64_t>(m);

  BalanceVerdict v;
  Rational top_exact = params.s * mm;
  Rational bottom_exact = params.s * (Rational(1) + e) * mm;
  v.top_size = std::min<std::size_t>(m, static_cast<std::size_t>(floor_times(params.s, mm)));
  v.bottom_size = std::min<std::size_t>(m, static_cast<std::size_t>(floor_times(params.s * (Rational(1) + e), mm)));
  v.top_rounded = !integral(top_exact);
  v.bottom_rounded = !integral(bottom_exact) || bottom_exact > Rational(mm);
  v.top_limit = params.s * (Rational(1) + e / 3) * total;
  v.bottom_limit = params.s * (Rational(1) + 2 * e / 3) * total;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
  for (std::size_t i = 0; i < v.top_size; ++i) {
    v.top_witness.push_back(order[i]);
    v.top_sum += counts[order[i]];
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return counts[a] < counts[b]; });
  for (std::size_t i = 0; i < v.bottom_size; ++i) {
    v.bottom_witness.push_back(order[i]);
    v.bottom_sum += counts[order[i]];
  }
  std::sort(v.top_witness.begin(), v.top_witness.end());
  std::sort(v.bottom_witness.begin(), v.bottom_witness.end());
  v.condition1 = Rational(static_cast<std::int64_t>(v.top_sum)) <= v.top_limit;
  v.condition2 = Rational(static_cast<std::int64_t>(v.bottom_sum)) >= v.bottom_limit;
  v.balanced = v.condition1 && v.condition2;
  return v;
}

csp::CspInstance list_instance(const csp::CspInstance& base, const ClauseList& list) {
  require(list.base_clauses == base.clause_count(), ErrorKind::shape_mismatch,
          "list was drawn from an instance with a different clause count");
  std::vector<csp::Clause> clauses;
  clauses.reserve(list.entries.size());
  for (auto e : list.entries) clauses.push_back(base.clause(e));
  return csp::CspInstance(base.num_vars(), std::move(clauses));
}

csp::Clause threshold_clause(const csp::CspInstance& base, std::span<const std::size_t> clause_indices,
                             const Rational& threshold, std::size_t max_arity) {
  require(!clause_indices.empty(), ErrorKind::invalid_argument, "threshold clause needs at least one input");
  std::vector<std::size_t> scope;
  for (auto j : clause_indices) {
    require(j < base.clause_count(), ErrorKind::invalid_argument, "threshold input is not a base clause");
    const auto& s = base.clause(j).scope();
    scope.insert(scope.end(), s.begin(), s.end());
  }
  std::sort(scope.begin(), scope.end());
  scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
  std::size_t a = scope.size();
  require(a <= std::min(max_arity, csp::kMaxArity), ErrorKind::resource_cap,
          "threshold clause over " + std::to_string(a) + " variables exceeds the arity cap " +
              std::to_string(max_arity));

  // Bit position (from the least significant end of a row) of each input variable.
  std::vector<std::vector<std::size_t>> shifts;
  for (auto j : clause_indices) {
    std::vector<std::size_t> sh;
    for (auto var : base.clause(j).scope()) {
      auto q = static_cast<std::size_t>(std::lower_bound(scope.begin(), scope.end(), var) - scope.begin());
      sh.push_back(a - 1 - q);
    }
    shifts.push_back(std::move(sh));
  }
  auto size = static_cast<std::int64_t>(clause_indices.size());
  std::vector<std::uint8_t> table(std::size_t{1} << a);
  for (std::uint64_t row = 0; row < table.size(); ++row) {
    std::int64_t ones = 0;
    for (std::size_t c = 0; c < clause_indices.size(); ++c) {
      std::uint64_t idx = 0;
      for (auto sh : shifts[c]) idx = (idx << 1) | ((row >> sh) & 1U);
      ones += base.clause(clause_indices[c]).value_at(idx) ? 1 : 0;
    }
    table[row] = Rational(ones) >= threshold * size ? 1 : 0;
  }
  return csp::Clause(std::move(scope), std::move(table));
}

TwoSidedOutput reduce_two_sided(const csp::CspInstance& base, const ReductionParams& params,
                                std::size_t max_arity) {
  params.validate();
  std::size_t m = base.clause_count();
  require(m > 0, ErrorKind::invalid_argument, "base instance has no clauses");
  Rng rng(params.seed);
  TwoSidedOutput out;
  std::vector<csp::Clause> clauses;
  for (std::size_t i = 0; i < base.num_vars(); ++i) {
    std::vector<std::size_t> sample(params.k);
    for (auto& j : sample) j = uniform_index(rng, m);
    clauses.push_back(threshold_clause(base, sample, params.threshold(), max_arity));
    out.samples.push_back(std::move(sample));
  }
  out.instance = csp::CspInstance(base.num_vars(), std::move(clauses));
  return out;
}

csp::CspInstance canonical_no_instance() {
  std::vector<csp::Clause> clauses;
  csp::Literal pos{0, false};
  csp::Literal neg{0, true};
  clauses.push_back(csp::Clause::disjunction(std::span(&pos, 1)));
  clauses.push_back(csp::Clause::disjunction(std::span(&neg, 1)));
  return csp::CspInstance(1, std::move(clauses));
}

sampler::SamplerParams one_sided_sampler_params(const ReductionParams& params) {
  sampler::SamplerParams sp;
  sp.epsilon = params.s * params.effective_epsilon();
  sp.delta = capped_at_one(params.k_condition());
  return sp;
}

OneSidedReport one_sided_report(const csp::CspInstance& base, const ReductionParams& params,
                                const sampler::SamplerFamily& fam, const BalanceVerdict& verdict) {
  OneSidedReport r;
  r.verdict = verdict;
  r.canonical = !verdict.balanced;
  r.threshold = params.threshold();
  r.k_condition = params.k_condition();
  r.k_condition_holds = r.k_condition <= Rational(1, 2);
  r.set_size = fam.set_size();
  if (r.set_size == 0 && !fam.sets.empty()) {
    for (const auto& s : fam.sets) r.set_size = std::max(r.set_size, s.size());
  }
  r.intersection_degree = sampler::max_intersection_degree(fam);
  r.sampler_lambda = fam.lambda;
  Rational mu = capped_at_one(params.s * (Rational(1) + params.effective_epsilon()));
  Rational dev = Rational(1) - params.threshold() / mu;
  r.failure_estimate = dev > Rational(0) && r.set_size > 0
                           ? oracle::chernoff_tail(oracle::ChernoffForm::lower, mu, dev, r.set_size)
                           : 1.0;
  r.lll = oracle::lll_condition(std::min(1.0, r.failure_estimate), r.intersection_degree);
  (void)base;
  return r;
}

OneSidedOutput reduce_one_sided(const csp::CspInstance& base, const ReductionParams& params,
                                const sampler::SamplerFamily& fam, std::size_t max_arity) {
  params.validate();
  OneSidedOutput out;
  out.list = sample_list(base, params);
  require(fam.ground_size == out.list.entries.size(), ErrorKind::shape_mismatch,
          "sampler ground set has " + std::to_string(fam.ground_size) + " elements but the list has " +
              std::to_string(out.list.entries.size()));
  auto verdict = check_balanced(out.list, params);
  out.report = one_sided_report(base, params, fam, verdict);
  if (!verdict.balanced) {
    out.instance = canonical_no_instance();
    return out;
  }
  std::vector<csp::Clause> clauses;
  clauses.reserve(fam.sets.size());
  std::vector<std::size_t> inputs;
  for (const auto& set : fam.sets) {
    inputs.clear();
    for (auto pos : set) inputs.push_back(out.list.entries[pos]);
    clauses.push_back(threshold_clause(base, inputs, params.threshold(), max_arity));
  }
  out.instance = csp::CspInstance(base.num_vars(), std::move(clauses));
  return out;
}

Rational threshold_optimum(const csp::CspInstance& base, const ClauseList& list,
                           const sampler::SamplerFamily& fam, const Rational& threshold, std::size_t cap) {
  std::size_t n = base.num_vars();
  require(n <= std::min<std::size_t>(cap, 30), ErrorKind::resource_cap,
          "threshold optimum over " + std::to_string(n) + " variables exceeds the cap");
  require(fam.ground_size == list.entries.size(), ErrorKind::shape_mismatch, "sampler and list sizes differ");
  require(!fam.sets.empty(), ErrorKind::invalid_argument, "sampler family has no sets");
  std::size_t words = (list.entries.size() + 63) / 64;
  std::size_t m = base.clause_count();

  // Positions of each base clause in the list.
  std::vector<std::uint64_t> positions(m * words, 0);
  for (std::size_t p = 0; p < list.entries.size(); ++p) {
    positions[list.entries[p] * words + p / 64] |= std::uint64_t{1} << (p % 64);
  }
  struct SetMask {
    std::vector<std::uint64_t> mask;
    bool distinct = true;
    std::int64_t size = 0;
  };
  std::vector<SetMask> sets;
  for (const auto& s : fam.sets) {
    SetMask sm;
    sm.mask.assign(words, 0);
    sm.size = static_cast<std::int64_t>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i > 0 && s[i] == s[i - 1]) sm.distinct = false;
      sm.mask[s[i] / 64] |= std::uint64_t{1} << (s[i] % 64);
    }
    sets.push_back(std::move(sm));
  }
  std::vector<std::uint64_t> str(words);
  std::size_t best = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    std::fill(str.begin(), str.end(), 0);
    for (std::size_t c = 0; c < m; ++c) {
      if (!base.clause(c).evaluate_mask(x)) continue;
      for (std::size_t w = 0; w < words; ++w) str[w] |= positions[c * words + w];
    }
    std::size_t sat = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      std::int64_t ones = 0;
      if (sets[i].distinct) {
        for (std::size_t w = 0; w < words; ++w) ones += std::popcount(str[w] & sets[i].mask[w]);
      } else {
        for (auto p : fam.sets[i]) ones += static_cast<std::int64_t>((str[p / 64] >> (p % 64)) & 1U);
      }
      if (Rational(ones) >= threshold * sets[i].size) ++sat;
    }
    best = std::max(best, sat);
    if (best == sets.size()) break;
  }
  return Rational(static_cast<std::int64_t>(best), static_cast<std::int64_t>(sets.size()));
}

Decider propagation_decider(std::size_t cap) {
  return [cap](const csp::ThreeSatExpansion& e) {
    return oracle::propagate_decide(e.instance, e.primary_vars, cap).satisfiable;
  };
}

std::size_t trial_budget(std::size_t n, std::size_t k) {
  require(k > 0, ErrorKind::invalid_argument, "k must be positive");
  double nn = static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(std::exp2(nn / static_cast<double>(k)) * nn * nn));
}

DriverResult solve_driver(const csp::CspInstance& base, const ReductionParams& params, std::size_t trials,
                          const DriverOptions& options) {
  params.validate();
  require(static_cast<bool>(options.decider), ErrorKind::invalid_argument, "driver needs a decider");
  if (options.kind == ReductionKind::one_sided) {
    require(options.family != nullptr, ErrorKind::invalid_argument,
            "the one-sided reduction needs a sampler family");
  }
  DriverResult result;
  result.trials.resize(trials);
  auto run_trial = [&](std::size_t i) {
    auto& out = result.trials[i];
    out.index = i;
    out.seed = derive_seed(params.seed, i);
    ReductionParams p = params;
    p.seed = out.seed;
    csp::CspInstance reduced;
    try {
      if (options.kind == ReductionKind::one_sided) {
        auto r = reduce_one_sided(base, p, *options.family, options.max_arity);
        out.balanced = r.report.verdict.balanced;
        reduced = std::move(r.instance);
      } else {
        reduced = reduce_two_sided(base, p, options.max_arity).instance;
      }
    } catch (const Error& e) {
      throw Error(e.kind(), "trial " + std::to_string(i) + ": " + e.what());
    }
    out.output_clauses = reduced.clause_count();
    auto cnf = csp::csp_to_3sat(reduced);
    out.cnf_vars = cnf.instance.num_vars();
    out.cnf_clauses = cnf.instance.clause_count();
    try {
      out.yes = options.decider(cnf);
    } catch (const std::exception& e) {
      throw Error(ErrorKind::subroutine_failure, "trial " + std::to_string(i) + ": " + e.what());
    }
  };
  std::size_t batch = options.stop_at_first_yes ? worker_count(trials, options.jobs) : trials;
  for (std::size_t start = 0; start < trials; start += batch) {
    std::size_t count = std::min(batch, trials - start);
    parallel_ranges(count, options.jobs, [&](std::size_t begin, std::size_t end, std::size_t) {
      for (std::size_t i = begin; i < end; ++i) run_trial(start + i);
    });
    if (!options.stop_at_first_yes) continue;
    auto hit = std::find_if(result.trials.begin() + static_cast<std::ptrdiff_t>(start),
                            result.trials.begin() + static_cast<std::ptrdiff_t>(start + count),
                            [](const TrialOutcome& t) { return t.yes; });
    if (hit != result.trials.begin() + static_cast<std::ptrdiff_t>(start + count)) {
      result.trials.erase(hit + 1, result.trials.end());
      break;
    }
  }
  for (const auto& t : result.trials) {
    if (t.yes) {
      result.yes = true;
      result.first_yes = t.index;
      break;
    }
  }
  return result;
}

}  // namespace gapforge::gap_eth
