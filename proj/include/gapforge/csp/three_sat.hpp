#pragma once

#include <cstddef>

#include "gapforge/csp/instance.hpp"
#include "gapforge/rational.hpp"

namespace gapforge::csp {

struct ExpansionLimits {
  std::size_t max_width = 20;
  std::size_t max_output_clauses = std::size_t{1} << 26;
};

// Worst-case number of output clauses produced for one input clause of the
// given width: max(8, 2^w (w - 2)).
std::size_t max_expansion(std::size_t width);

struct ThreeSatExpansion {
  CspInstance instance;
  std::size_t primary_vars = 0;
  std::size_t padding_vars = 0;
  std::size_t chain_vars = 0;
  std::size_t input_clauses = 0;
  std::size_t output_clauses = 0;
  std::size_t max_clauses_per_input = 0;
  std::size_t width_bound_expansion = 0;

  // M_out / m.
  Rational expansion_factor() const;
  // Unsatisfied output fraction forced by an input instance of soundness s:
  // every violated input clause leaves at least one output clause violated.
  Rational induced_gap(const Rational& input_soundness) const;
  // Lower bound on the input fraction satisfied by the restriction of an
  // output assignment leaving a fraction `output_unsat` violated.
  Rational restricted_fraction(const Rational& output_unsat) const;
};

// Per-clause expansion. Width-3 disjunctions are copied unchanged; shorter
// disjunctions and falsifying rows of short predicates are padded with shared
// auxiliary variables; rows of wider predicates are split into chains.
ThreeSatExpansion csp_to_3sat(const CspInstance& inst, const ExpansionLimits& limits = {});

}  // namespace gapforge::csp
