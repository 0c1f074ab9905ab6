#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "gapforge/bits.hpp"
#include "gapforge/csp/instance.hpp"

namespace gapforge::oracle {

struct DeciderResult {
  bool satisfiable = false;
  std::optional<Assignment> witness;
  std::uint64_t primary_assignments_tried = 0;
};

// Satisfiability of a disjunctive instance by enumerating the first `primary`
// variables, unit-propagating, and setting every unforced variable to false.
// A positive answer is always verified. The search is complete when the other
// variables are auxiliaries introduced by csp_to_3sat.
DeciderResult propagate_decide(const csp::CspInstance& cnf, std::size_t primary, std::size_t cap = 24);

}  // namespace gapforge::oracle
