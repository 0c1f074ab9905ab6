#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gapforge/circuit/circuit.hpp"
#include "gapforge/csp/instance.hpp"
#include "gapforge/pcp/transform.hpp"
#include "gapforge/rational.hpp"
#include "gapforge/sampler/graph.hpp"

namespace support {

using gapforge::Rational;
namespace csp = gapforge::csp;

// Reference implementations kept deliberately naive so they share no code
// paths with the library routines they check.

// Maximum satisfied fraction by direct evaluation of every assignment.
Rational naive_optimum(const csp::CspInstance& inst);

// Dense eigensolve of the walk matrix; second largest absolute eigenvalue.
double dense_lambda(const gapforge::sampler::RegularGraph& g);
double dense_lambda_of_sets(const std::vector<std::vector<std::size_t>>& adjacency);

// Max (or min) total of `size` entries over all subsets, by enumeration.
std::size_t subset_extremum(const std::vector<std::size_t>& counts, std::size_t size, bool maximum);

// Max acceptance over every proof, via run_check on each check.
Rational naive_max_acceptance(const gapforge::pcp::TransformedSystem& ts);

// Worst output ones over all inputs with at most max_ones ones, evaluating
// the layer directly.
std::size_t naive_worst_output(const gapforge::circuit::Layer& layer, std::size_t max_ones);

// Planted satisfiable part plus `pairs` complementary unit pairs: the
// optimum is exactly (m - pairs) / m.
csp::CspInstance near_satisfiable(std::size_t n, std::size_t m, std::size_t pairs, std::uint64_t seed);

// Complementary unit pairs on distinct variables: optimum exactly 1/2.
csp::CspInstance unit_pairs(std::size_t n, std::size_t pairs);

// Random truth-table clauses of arity 1..3 whose tables have the given
// density of ones.
csp::CspInstance random_tables(std::size_t n, std::size_t m, double density, std::uint64_t seed);

std::string temp_path(const std::string& name);
std::string read_text(const std::string& path);

}  // namespace support
