#pragma once

#include <cstddef>
#include <cstdint>

#include "gapforge/bits.hpp"
#include "gapforge/csp/instance.hpp"
#include "gapforge/rational.hpp"

namespace gapforge::oracle {

struct OracleOptions {
  std::size_t cap = 24;
  unsigned jobs = 1;
};

struct OracleReport {
  Rational optimum;
  std::size_t satisfied = 0;
  Assignment argmax;
  std::uint64_t enumerated = 0;
  // No variables or no clauses.
  bool degenerate = false;
  double wall_seconds = 0.0;
};

// Exact maximum satisfied fraction over all 2^n assignments. Ties resolve to
// the lowest assignment index (variable v is bit v).
OracleReport brute_force_opt(const csp::CspInstance& inst, const OracleOptions& options = {});

}  // namespace gapforge::oracle
