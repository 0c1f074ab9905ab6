#include "gapforge/csp/generate.hpp"

#include <algorithm>
#include <vector>

#include "gapforge/error.hpp"
#include "gapforge/random.hpp"

namespace gapforge::csp {

namespace {

std::vector<Literal> random_literals(std::size_t n, std::size_t arity, Rng& rng) {
  std::vector<Literal> lits;
  while (lits.size() < arity) {
    std::size_t v = uniform_index(rng, n);
    if (std::any_of(lits.begin(), lits.end(), [v](const Literal& l) { return l.var == v; })) continue;
    lits.push_back({v, (rng() & 1U) != 0});
  }
  return lits;
}

}  // namespace

CspInstance random_ksat(std::size_t n, std::size_t m, std::size_t arity, std::uint64_t seed) {
  require(arity >= 1 && arity <= n, ErrorKind::invalid_argument, "clause arity must lie in [1, n]");
  Rng rng(seed);
  std::vector<Clause> clauses;
  for (std::size_t j = 0; j < m; ++j) clauses.push_back(Clause::disjunction(random_literals(n, arity, rng)));
  return CspInstance(n, std::move(clauses));
}

CspInstance planted_3sat(std::size_t n, std::size_t m, std::uint64_t seed) {
  require(n >= 3 && n <= 64, ErrorKind::invalid_argument, "planted instances need 3 to 64 variables");
  Rng rng(seed);
  std::uint64_t hidden = rng();
  std::vector<Clause> clauses;
  while (clauses.size() < m) {
    auto c = Clause::disjunction(random_literals(n, 3, rng));
    if (c.evaluate_mask(hidden)) clauses.push_back(std::move(c));
  }
  return CspInstance(n, std::move(clauses));
}

CspInstance sign_pattern_blocks(std::size_t n, std::span<const std::array<std::size_t, 3>> triples) {
  std::vector<Clause> clauses;
  for (const auto& t : triples) {
    for (unsigned signs = 0; signs < 8; ++signs) {
      std::array<Literal, 3> lits{Literal{t[0], (signs & 4U) != 0}, Literal{t[1], (signs & 2U) != 0},
                                  Literal{t[2], (signs & 1U) != 0}};
      clauses.push_back(Clause::disjunction(lits));
    }
  }
  return CspInstance(n, std::move(clauses));
}

}  // namespace gapforge::csp
