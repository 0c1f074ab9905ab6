#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gapforge/bits.hpp"
#include "gapforge/rational.hpp"
#include "gapforge/sampler/graph.hpp"

namespace gapforge::sampler {

struct SamplerParams {
  Rational epsilon;
  Rational delta;
  // Only families used for the low-sample property carry a threshold.
  std::optional<Rational> gamma;
  double target_lambda = 0.5;
  std::size_t min_degree = 3;
  // 0 means N - 1 for simple graphs and 4N for the configuration model.
  std::size_t max_degree = 0;
  GraphModel model = GraphModel::simple;

  void validate() const;
};

enum class FamilyKind {
  // floor(N/2) sets: the first vertices' neighborhoods.
  halved,
  // One set per vertex.
  full,
};

enum class Provenance { expander, explicit_list };

struct SamplerFamily {
  std::size_t ground_size = 0;
  // Sorted multisets.
  std::vector<std::vector<std::size_t>> sets;
  SamplerParams params;
  // Measured second eigenvalue; absent for explicit lists.
  std::optional<double> lambda;
  std::size_t degree = 0;
  Provenance provenance = Provenance::explicit_list;

  // Common set size, or 0 when the sizes differ.
  std::size_t set_size() const;
};

// lambda with lambda^2 / (4 eps^2) <= delta: the fraction of full-family
// samples deviating by more than eps is at most delta.
double chebyshev_lambda(const Rational& epsilon, const Rational& delta);

// Largest lambda for which both sampler properties follow from the mixing
// lemma for the given family kind (halving doubles the failure fractions).
double analytic_lambda(const SamplerParams& params, FamilyKind kind);

SamplerFamily family_from_graph(const RegularGraph& g, const SamplerParams& params, double lambda,
                                FamilyKind kind, std::optional<std::size_t> set_count = std::nullopt);

// Searches the smallest degree (exponential then binary search) whose graph
// has lambda <= target_lambda. set_count overrides the number of kept sets.
SamplerFamily build_sampler_family(const SamplerParams& params, std::size_t n, std::uint64_t seed,
                                   FamilyKind kind = FamilyKind::halved,
                                   std::optional<std::size_t> set_count = std::nullopt);

// Maximum, over sets, of the number of other sets it intersects.
std::size_t max_intersection_degree(const SamplerFamily& fam);

struct StringReport {
  std::size_t index = 0;
  Rational mean;
  std::size_t deviating = 0;
  Rational deviation_fraction;
  bool property1 = true;
  // Present when the zero fraction eta satisfies eta < (1 - gamma) / 2.
  std::optional<Rational> eta;
  std::optional<Rational> low_fraction;
  std::optional<double> mixing_bound;
  bool property2 = true;
  bool mixing_ok = true;
};

struct SamplerReport {
  std::vector<StringReport> strings;
  Rational worst_deviation;
  std::optional<Rational> worst_low;
  bool property1_pass = true;
  bool property2_pass = true;
  bool mixing_pass = true;

  bool pass() const { return property1_pass && property2_pass && mixing_pass; }
};

SamplerReport certify_sampler(const SamplerFamily& fam, std::span<const BitString> corpus, unsigned jobs = 1);

// (4 lambda^2 / (1 - gamma)^2) eta.
double mixing_bound(double lambda, double gamma, double eta);

struct CorpusOptions {
  std::uint64_t seed = 1;
  std::size_t random_strings = 8;
  std::size_t search_steps = 0;  // 0 means 20 N
  // Zero fractions for clustered and searched strings; empty means a grid
  // below (1 - gamma) / 2.
  std::vector<Rational> etas;
};

// Random, alternating, clustered-zeros and locally searched worst-case strings.
std::vector<BitString> adversarial_corpus(const SamplerFamily& fam, const CorpusOptions& options = {});

std::string serialize_family(const SamplerFamily& fam);
SamplerFamily parse_family(std::string_view text);

}  // namespace gapforge::sampler
