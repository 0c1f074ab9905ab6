#include "gapforge/csp/three_sat.hpp"

#include <array>
#include <string>

#include "gapforge/error.hpp"

namespace gapforge::csp {

std::size_t max_expansion(std::size_t width) {
  if (width <= 3) return 8;
  return (std::size_t{1} << width) * (width - 2);
}

Rational ThreeSatExpansion::expansion_factor() const {
  if (input_clauses == 0) return Rational(0);
  return Rational(static_cast<std::int64_t>(output_clauses),
                  static_cast<std::int64_t>(input_clauses));
}

Rational ThreeSatExpansion::induced_gap(const Rational& input_soundness) const {
  if (output_clauses == 0) return Rational(0);
  return (Rational(1) - input_soundness) * Rational(static_cast<std::int64_t>(input_clauses),
                                                    static_cast<std::int64_t>(output_clauses));
}

Rational ThreeSatExpansion::restricted_fraction(const Rational& output_unsat) const {
  if (input_clauses == 0) return Rational(1);
  auto lost = output_unsat * Rational(static_cast<std::int64_t>(output_clauses),
                                      static_cast<std::int64_t>(input_clauses));
  return lost >= 1 ? Rational(0) : Rational(1) - lost;
}

namespace {

class Builder {
 public:
  Builder(std::size_t primary, const ExpansionLimits& limits) : next_var_(primary), limits_(limits) {}

  void add(std::vector<Literal> lits) {
    if (clauses_.size() >= limits_.max_output_clauses) {
      fail(ErrorKind::resource_cap, "3SAT expansion exceeds " +
                                        std::to_string(limits_.max_output_clauses) + " clauses");
    }
    clauses_.push_back(Clause::disjunction(lits));
  }

  std::size_t fresh() { return next_var_++; }

  std::size_t pad(std::size_t k) {
    while (padding_.size() <= k) padding_.push_back(fresh());
    return padding_[k];
  }

  // Clauses forcing the disjunction of `lits` (size <= 3), padded to width 3.
  void add_padded(const std::vector<Literal>& lits) {
    std::size_t missing = 3 - lits.size();
    for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << missing); ++signs) {
      auto row = lits;
      for (std::size_t k = 0; k < missing; ++k) row.push_back({pad(k), ((signs >> k) & 1U) != 0});
      add(std::move(row));
    }
  }

  // (l1 v l2 v y1)(~y1 v l3 v y2)...(~y_{w-3} v l_{w-1} v l_w)
  void add_chain(const std::vector<Literal>& lits) {
    std::size_t w = lits.size();
    std::size_t prev = fresh();
    ++chain_;
    add({lits[0], lits[1], {prev, false}});
    for (std::size_t k = 2; k + 2 < w; ++k) {
      std::size_t next = fresh();
      ++chain_;
      add({{prev, true}, lits[k], {next, false}});
      prev = next;
    }
    add({{prev, true}, lits[w - 2], lits[w - 1]});
  }

  std::size_t size() const { return clauses_.size(); }
  std::size_t vars() const { return next_var_; }
  std::size_t padding() const { return padding_.size(); }
  std::size_t chain() const { return chain_; }
  std::vector<Clause> take() { return std::move(clauses_); }

 private:
  std::size_t next_var_;
  ExpansionLimits limits_;
  std::vector<std::size_t> padding_;
  std::size_t chain_ = 0;
  std::vector<Clause> clauses_;
};

// Literals of the disjunction excluding one falsifying row.
std::vector<Literal> row_clause(const Clause& c, std::uint64_t row) {
  std::vector<Literal> lits;
  for (std::size_t k = 0; k < c.arity(); ++k) {
    bool bit = (row >> (c.arity() - 1 - k)) & 1U;
    lits.push_back({c.scope()[k], bit});
  }
  return lits;
}

}  // namespace

ThreeSatExpansion csp_to_3sat(const CspInstance& inst, const ExpansionLimits& limits) {
  if (inst.width() > limits.max_width) {
    fail(ErrorKind::resource_cap, "width " + std::to_string(inst.width()) +
                                      " exceeds the expansion cap " + std::to_string(limits.max_width));
  }
  Builder b(inst.num_vars(), limits);
  ThreeSatExpansion out;
  for (const auto& c : inst.clauses()) {
    std::size_t before = b.size();
    auto lits = c.literals();
    if (lits && lits->size() == 3) {
      b.add(*lits);
    } else if (lits && lits->size() < 3) {
      b.add_padded(*lits);
    } else {
      for (std::uint64_t row = 0; row < c.table().size(); ++row) {
        if (c.value_at(row)) continue;
        auto rc = row_clause(c, row);
        if (rc.size() <= 3) {
          b.add_padded(rc);
        } else {
          b.add_chain(rc);
        }
      }
    }
    out.max_clauses_per_input = std::max(out.max_clauses_per_input, b.size() - before);
  }
  out.primary_vars = inst.num_vars();
  out.padding_vars = b.padding();
  out.chain_vars = b.chain();
  out.input_clauses = inst.clause_count();
  out.output_clauses = b.size();
  out.width_bound_expansion = max_expansion(inst.width());
  auto vars = b.vars();
  out.instance = CspInstance(vars, b.take());
  return out;
}

}  // namespace gapforge::csp
