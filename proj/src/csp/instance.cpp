#include "gapforge/csp/instance.hpp"

#include <algorithm>
#include <string>

#include "gapforge/error.hpp"

namespace gapforge::csp {

Clause::Clause(std::vector<std::size_t> scope, std::vector<std::uint8_t> table)
    : scope_(std::move(scope)), table_(std::move(table)) {
  require(scope_.size() <= kMaxArity, ErrorKind::resource_cap,
          "clause arity " + std::to_string(scope_.size()) + " exceeds " +
              std::to_string(kMaxArity));
  require(table_.size() == (std::size_t{1} << scope_.size()), ErrorKind::malformed_instance,
          "truth table length must be 2^arity");
  auto sorted = scope_;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          ErrorKind::malformed_instance, "clause scope repeats a variable");
  for (auto& entry : table_) {
    require(entry <= 1, ErrorKind::malformed_instance, "truth table entries must be 0 or 1");
  }
}

Clause Clause::disjunction(std::span<const Literal> literals) {
  std::vector<Literal> distinct;
  bool tautology = false;
  for (const auto& lit : literals) {
    auto same_var = std::find_if(distinct.begin(), distinct.end(),
                                 [&](const Literal& l) { return l.var == lit.var; });
    if (same_var == distinct.end()) {
      distinct.push_back(lit);
    } else if (same_var->negated != lit.negated) {
      tautology = true;
    }
  }
  std::vector<std::size_t> scope;
  scope.reserve(distinct.size());
  std::uint64_t falsifying = 0;
  for (std::size_t k = 0; k < distinct.size(); ++k) {
    scope.push_back(distinct[k].var);
    // A literal is false when its variable takes the negation flag's value.
    if (distinct[k].negated) falsifying |= std::uint64_t{1} << (distinct.size() - 1 - k);
  }
  std::vector<std::uint8_t> table(std::size_t{1} << scope.size(), 1);
  if (!tautology) table[falsifying] = 0;
  return Clause(std::move(scope), std::move(table));
}

Clause Clause::constant(bool value) { return Clause({}, {static_cast<std::uint8_t>(value)}); }

bool Clause::evaluate(const Assignment& a) const {
  std::uint64_t index = 0;
  for (auto v : scope_) {
    require(v < a.size(), ErrorKind::malformed_instance,
            "clause variable " + std::to_string(v) + " outside assignment of length " +
                std::to_string(a.size()));
    index = (index << 1) | static_cast<std::uint64_t>(a[v]);
  }
  return table_[index] != 0;
}

bool Clause::evaluate_mask(std::uint64_t x) const {
  std::uint64_t index = 0;
  for (auto v : scope_) index = (index << 1) | ((x >> v) & 1U);
  return table_[index] != 0;
}

std::size_t Clause::falsifying_rows() const noexcept {
  return static_cast<std::size_t>(std::count(table_.begin(), table_.end(), std::uint8_t{0}));
}

std::optional<std::vector<Literal>> Clause::literals() const {
  if (falsifying_rows() != 1) return std::nullopt;
  auto row = static_cast<std::uint64_t>(
      std::find(table_.begin(), table_.end(), std::uint8_t{0}) - table_.begin());
  std::vector<Literal> out;
  out.reserve(arity());
  for (std::size_t k = 0; k < arity(); ++k) {
    bool bit = (row >> (arity() - 1 - k)) & 1U;
    out.push_back({scope_[k], bit});
  }
  return out;
}

bool evaluate_clause(const Clause& clause, const Assignment& a) { return clause.evaluate(a); }

CspInstance::CspInstance(std::size_t num_vars, std::vector<Clause> clauses)
    : num_vars_(num_vars), clauses_(std::move(clauses)) {
  for (std::size_t j = 0; j < clauses_.size(); ++j) {
    for (auto v : clauses_[j].scope()) {
      require(v < num_vars_, ErrorKind::malformed_instance,
              "clause " + std::to_string(j) + " references variable " + std::to_string(v) +
                  " but the instance has " + std::to_string(num_vars_));
    }
    width_ = std::max(width_, clauses_[j].arity());
  }
}

bool CspInstance::is_3sat() const {
  return std::all_of(clauses_.begin(), clauses_.end(), [](const Clause& c) {
    return c.arity() <= 3 && c.falsifying_rows() == 1;
  });
}

SatisfiedFraction satisfied_fraction(const CspInstance& inst, const Assignment& a) {
  require(a.size() == inst.num_vars(), ErrorKind::shape_mismatch,
          "assignment length does not match the instance");
  if (inst.degenerate()) return {Rational(1), 0, true};
  std::size_t satisfied = 0;
  for (const auto& c : inst.clauses()) satisfied += c.evaluate(a) ? 1 : 0;
  return {Rational(static_cast<std::int64_t>(satisfied),
                   static_cast<std::int64_t>(inst.clause_count())),
          satisfied, false};
}

GapSpec::GapSpec(Rational c, Rational s) : completeness(c), soundness(s) {
  require(c > 0 && c <= 1, ErrorKind::invalid_argument, "completeness must lie in (0,1]");
  require(s >= 0 && s < 1, ErrorKind::invalid_argument, "soundness must lie in [0,1)");
  require(s < c, ErrorKind::invalid_argument, "soundness must be below completeness");
}

}  // namespace gapforge::csp
