#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

#include "gapforge/csp/generate.hpp"
#include "gapforge/random.hpp"

namespace support {

Rational naive_optimum(const csp::CspInstance& inst) {
  std::size_t best = 0;
  std::size_t n = inst.num_vars();
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    std::size_t sat = 0;
    for (const auto& c : inst.clauses()) {
      std::uint64_t row = 0;
      for (auto v : c.scope()) row = (row << 1) | ((x >> v) & 1U);
      sat += c.value_at(row) ? 1 : 0;
    }
    best = std::max(best, sat);
  }
  if (inst.clause_count() == 0) return Rational(1);
  return Rational(static_cast<std::int64_t>(best), static_cast<std::int64_t>(inst.clause_count()));
}

double dense_lambda_of_sets(const std::vector<std::vector<std::size_t>>& adjacency) {
  auto n = static_cast<Eigen::Index>(adjacency.size());
  Eigen::MatrixXd walk = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index v = 0; v < n; ++v) {
    const auto& nb = adjacency[static_cast<std::size_t>(v)];
    for (auto u : nb) walk(v, static_cast<Eigen::Index>(u)) += 1.0 / static_cast<double>(nb.size());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(walk, Eigen::EigenvaluesOnly);
  std::vector<double> values(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(values.begin(), values.end());
  // Drop one copy of the top eigenvalue 1.
  values.pop_back();
  double lambda = 0.0;
  for (double v : values) lambda = std::max(lambda, std::abs(v));
  return lambda;
}

double dense_lambda(const gapforge::sampler::RegularGraph& g) { return dense_lambda_of_sets(g.adjacency()); }

std::size_t subset_extremum(const std::vector<std::size_t>& counts, std::size_t size, bool maximum) {
  std::size_t m = counts.size();
  std::size_t best = maximum ? 0 : SIZE_MAX;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != size) continue;
    std::size_t total = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if ((mask >> i) & 1U) total += counts[i];
    }
    best = maximum ? std::max(best, total) : std::min(best, total);
  }
  return best;
}

Rational naive_max_acceptance(const gapforge::pcp::TransformedSystem& ts) {
  std::size_t bits = ts.proof_length();
  std::size_t best = 0;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << bits); ++p) {
    gapforge::BitString flat(bits);
    for (std::size_t b = 0; b < bits; ++b) flat.set(b, (p >> b) & 1U);
    auto proof = ts.unflatten(flat);
    std::size_t acc = 0;
    for (std::size_t j = 0; j < ts.check_count(); ++j) acc += gapforge::pcp::run_check(ts, j, proof).accept ? 1 : 0;
    best = std::max(best, acc);
  }
  return Rational(static_cast<std::int64_t>(best), static_cast<std::int64_t>(ts.check_count()));
}

std::size_t naive_worst_output(const gapforge::circuit::Layer& layer, std::size_t max_ones) {
  std::size_t w = layer.input_width;
  std::size_t worst = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << w); ++x) {
    if (static_cast<std::size_t>(__builtin_popcountll(x)) > max_ones) continue;
    auto out = layer.evaluate(gapforge::LayerString::from_mask(x, w));
    worst = std::max(worst, out.count());
  }
  return worst;
}

csp::CspInstance near_satisfiable(std::size_t n, std::size_t m, std::size_t pairs, std::uint64_t seed) {
  auto planted = csp::planted_3sat(n, m - 2 * pairs, seed);
  std::vector<csp::Clause> clauses = planted.clauses();
  for (std::size_t p = 0; p < pairs; ++p) {
    csp::Literal pos{p % n, false};
    csp::Literal neg{p % n, true};
    clauses.push_back(csp::Clause::disjunction(std::span(&pos, 1)));
    clauses.push_back(csp::Clause::disjunction(std::span(&neg, 1)));
  }
  return csp::CspInstance(n, std::move(clauses));
}

csp::CspInstance unit_pairs(std::size_t n, std::size_t pairs) { return near_satisfiable(std::max<std::size_t>(n, 3), 2 * pairs, pairs, 0); }

csp::CspInstance random_tables(std::size_t n, std::size_t m, double density, std::uint64_t seed) {
  gapforge::Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<csp::Clause> clauses;
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t arity = 1 + gapforge::uniform_index(rng, std::min<std::size_t>(3, n));
    std::vector<std::size_t> scope;
    while (scope.size() < arity) {
      auto v = gapforge::uniform_index(rng, n);
      if (std::find(scope.begin(), scope.end(), v) == scope.end()) scope.push_back(v);
    }
    std::vector<std::uint8_t> table(std::size_t{1} << arity);
    for (auto& e : table) e = unit(rng) < density ? 1 : 0;
    clauses.emplace_back(std::move(scope), std::move(table));
  }
  return csp::CspInstance(n, std::move(clauses));
}

std::string temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "gapforge_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace support
