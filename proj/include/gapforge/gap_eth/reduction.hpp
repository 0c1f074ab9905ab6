#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gapforge/csp/instance.hpp"
#include "gapforge/csp/three_sat.hpp"
#include "gapforge/oracle/stats.hpp"
#include "gapforge/rational.hpp"
#include "gapforge/sampler/sampler.hpp"

namespace gapforge::gap_eth {

struct ReductionParams {
  Rational s{1, 2};
  Rational epsilon{1, 4};
  std::size_t k = 16;
  std::size_t t = 8;
  std::uint64_t seed = 1;
  // Shrink epsilon below 1/100 before use.
  bool normalize = false;

  void validate() const;
  Rational effective_epsilon() const;
  // s(1 + eps/2).
  Rational threshold() const;
  // 1 / (s^2 eps^2 k).
  Rational k_condition() const;
};

// m / n.
Rational clause_density(const csp::CspInstance& base);

enum class ListMode {
  sampled,
  // The base clauses repeated t times in order.
  repeated,
};

struct ClauseList {
  std::size_t base_clauses = 0;
  std::vector<std::size_t> entries;
  ListMode mode = ListMode::sampled;

  std::vector<std::size_t> counts() const;
};

// t * m entries drawn with replacement using params.seed.
ClauseList sample_list(const csp::CspInstance& base, const ReductionParams& params,
                       ListMode mode = ListMode::sampled);

struct BalanceVerdict {
  bool balanced = false;
  bool condition1 = false;
  bool condition2 = false;
  // floor(s m) and floor(s (1 + eps) m), capped at m.
  std::size_t top_size = 0;
  std::size_t bottom_size = 0;
  bool top_rounded = false;
  bool bottom_rounded = false;
  // Most occurrences of any top_size clauses, against s (1 + eps/3) |L|.
  std::size_t top_sum = 0;
  Rational top_limit;
  // Fewest occurrences of any bottom_size clauses, against s (1 + 2 eps/3) |L|.
  std::size_t bottom_sum = 0;
  Rational bottom_limit;
  std::vector<std::size_t> top_witness;
  std::vector<std::size_t> bottom_witness;
};

BalanceVerdict check_balanced(const ClauseList& list, const ReductionParams& params);

// The base clauses in list order.
csp::CspInstance list_instance(const csp::CspInstance& base, const ClauseList& list);

// Thr_threshold over the listed base clauses (with multiplicity) as one
// truth-table clause on the union of their scopes.
csp::Clause threshold_clause(const csp::CspInstance& base, std::span<const std::size_t> clause_indices,
                             const Rational& threshold, std::size_t max_arity = 20);

struct TwoSidedOutput {
  csp::CspInstance instance;
  // Base clause indices sampled for each output clause.
  std::vector<std::vector<std::size_t>> samples;
};

// n threshold clauses, each over k base clauses drawn with replacement.
TwoSidedOutput reduce_two_sided(const csp::CspInstance& base, const ReductionParams& params,
                                std::size_t max_arity = 20);

// Two complementary unit clauses: every assignment satisfies exactly half.
csp::CspInstance canonical_no_instance();

struct OneSidedReport {
  BalanceVerdict verdict;
  bool canonical = false;
  Rational threshold;
  Rational k_condition;
  bool k_condition_holds = false;
  std::size_t set_size = 0;
  std::size_t intersection_degree = 0;
  // Chernoff estimate of Pr[B_i = 0] under an assignment meeting s(1 + eps).
  double failure_estimate = 0.0;
  oracle::LllReport lll;
  std::optional<double> sampler_lambda;
};

struct OneSidedOutput {
  csp::CspInstance instance;
  ClauseList list;
  OneSidedReport report;
};

// Parameters of the sampler the reduction expects: deviation s eps and
// failure fraction 1 / (s^2 eps^2 k), capped at 1.
sampler::SamplerParams one_sided_sampler_params(const ReductionParams& params);

OneSidedReport one_sided_report(const csp::CspInstance& base, const ReductionParams& params,
                                const sampler::SamplerFamily& fam, const BalanceVerdict& verdict);

// The sampler's ground set must have |L| = t m elements.
OneSidedOutput reduce_one_sided(const csp::CspInstance& base, const ReductionParams& params,
                                const sampler::SamplerFamily& fam, std::size_t max_arity = 20);

// Exact optimum of the one-sided output for a balanced list, computed over
// all 2^n assignments with bitsets instead of materialized truth tables.
Rational threshold_optimum(const csp::CspInstance& base, const ClauseList& list,
                           const sampler::SamplerFamily& fam, const Rational& threshold, std::size_t cap = 24);

enum class ReductionKind { one_sided, two_sided };

// Answers satisfiability of a 3SAT expansion.
using Decider = std::function<bool(const csp::ThreeSatExpansion&)>;

// Enumerates the primary variables with unit propagation.
Decider propagation_decider(std::size_t cap = 24);

struct TrialOutcome {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  // Absent for the two-sided reduction.
  std::optional<bool> balanced;
  std::size_t output_clauses = 0;
  std::size_t cnf_vars = 0;
  std::size_t cnf_clauses = 0;
  bool yes = false;
};

struct DriverResult {
  bool yes = false;
  std::optional<std::size_t> first_yes;
  std::vector<TrialOutcome> trials;
};

struct DriverOptions {
  ReductionKind kind = ReductionKind::one_sided;
  // Required for the one-sided reduction.
  const sampler::SamplerFamily* family = nullptr;
  Decider decider;
  unsigned jobs = 1;
  std::size_t max_arity = 20;
  // Drop the trials after the first YES. Trials still run in batches of
  // `jobs`, so the recorded trials do not depend on the job count.
  bool stop_at_first_yes = false;
};

// ceil(2^(n/k) n^2).
std::size_t trial_budget(std::size_t n, std::size_t k);

// Trial i reruns the reduction with seed derive_seed(params.seed, i). The
// verdict is YES iff some trial's output is accepted by the decider.
DriverResult solve_driver(const csp::CspInstance& base, const ReductionParams& params, std::size_t trials,
                          const DriverOptions& options);

}  // namespace gapforge::gap_eth
