#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gapforge/bits.hpp"
#include "gapforge/rational.hpp"

namespace gapforge::csp {

inline constexpr std::size_t kMaxArity = 24;

struct Literal {
  std::size_t var = 0;
  bool negated = false;
  friend bool operator==(const Literal&, const Literal&) = default;
};

// A predicate over an ordered scope, stored as a full truth table. The first
// scope variable is the most significant bit of the table index.
class Clause {
 public:
  Clause(std::vector<std::size_t> scope, std::vector<std::uint8_t> table);

  // Repeated literals collapse; a complementary pair yields the all-true table.
  static Clause disjunction(std::span<const Literal> literals);
  static Clause constant(bool value);

  const std::vector<std::size_t>& scope() const noexcept { return scope_; }
  const std::vector<std::uint8_t>& table() const noexcept { return table_; }
  std::size_t arity() const noexcept { return scope_.size(); }

  bool value_at(std::uint64_t index) const { return table_[index] != 0; }
  bool evaluate(const Assignment& a) const;
  // Bit v of x is variable v; all scope variables must be below 64.
  bool evaluate_mask(std::uint64_t x) const;

  std::size_t falsifying_rows() const noexcept;
  // The literals of this clause when it is a disjunction (exactly one
  // falsifying row); the empty disjunction is the constant-false clause.
  std::optional<std::vector<Literal>> literals() const;

  friend bool operator==(const Clause&, const Clause&) = default;

 private:
  std::vector<std::size_t> scope_;
  std::vector<std::uint8_t> table_;
};

bool evaluate_clause(const Clause& clause, const Assignment& a);

class CspInstance {
 public:
  CspInstance() = default;
  CspInstance(std::size_t num_vars, std::vector<Clause> clauses);

  std::size_t num_vars() const noexcept { return num_vars_; }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  std::size_t clause_count() const noexcept { return clauses_.size(); }
  const Clause& clause(std::size_t j) const { return clauses_[j]; }
  // Maximum clause arity.
  std::size_t width() const noexcept { return width_; }
  bool degenerate() const noexcept { return clauses_.empty(); }
  // Every clause is a disjunction of at most three literals.
  bool is_3sat() const;

  friend bool operator==(const CspInstance& a, const CspInstance& b) {
    return a.num_vars_ == b.num_vars_ && a.clauses_ == b.clauses_;
  }

 private:
  std::size_t num_vars_ = 0;
  std::vector<Clause> clauses_;
  std::size_t width_ = 0;
};

struct SatisfiedFraction {
  Rational value;
  std::size_t satisfied = 0;
  bool degenerate = false;
};

SatisfiedFraction satisfied_fraction(const CspInstance& inst, const Assignment& a);

struct GapSpec {
  Rational completeness;
  Rational soundness;

  GapSpec(Rational c, Rational s);
};

}  // namespace gapforge::csp
