#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "gapforge/csp/instance.hpp"

namespace gapforge::csp {

// m clauses, each a disjunction of `arity` distinct variables with random signs.
CspInstance random_ksat(std::size_t n, std::size_t m, std::size_t arity, std::uint64_t seed);

// Random 3-clauses satisfied by a hidden assignment drawn from the seed.
CspInstance planted_3sat(std::size_t n, std::size_t m, std::uint64_t seed);

// All eight sign patterns over each triple: every assignment satisfies
// exactly 7/8 of the clauses.
CspInstance sign_pattern_blocks(std::size_t n, std::span<const std::array<std::size_t, 3>> triples);

}  // namespace gapforge::csp
