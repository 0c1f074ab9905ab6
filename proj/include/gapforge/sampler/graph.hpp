#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gapforge::sampler {

enum class GraphModel {
  // Uniform pairing of half-edges; loops and parallel edges allowed.
  configuration,
  // Circulant start followed by random degree-preserving switches; no loops
  // or parallel edges.
  simple,
};

const char* to_string(GraphModel model);

class RegularGraph {
 public:
  // Each list holds the neighbors of one vertex; a loop appears twice in the
  // list of its vertex.
  RegularGraph(std::size_t degree, std::vector<std::vector<std::size_t>> adjacency);

  std::size_t size() const noexcept { return adjacency_.size(); }
  std::size_t degree() const noexcept { return degree_; }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_[v]; }
  const std::vector<std::vector<std::size_t>>& adjacency() const noexcept { return adjacency_; }

  bool connected() const;
  bool simple() const;

  friend bool operator==(const RegularGraph&, const RegularGraph&) = default;

 private:
  std::size_t degree_ = 0;
  std::vector<std::vector<std::size_t>> adjacency_;
};

RegularGraph complete_graph(std::size_t n);
RegularGraph disjoint_union(const RegularGraph& a, const RegularGraph& b);

struct ExpanderOptions {
  GraphModel model = GraphModel::configuration;
  std::size_t max_attempts = 200;
};

// A connected D-regular graph; deterministic for a fixed seed.
RegularGraph build_expander(std::size_t n, std::size_t degree, std::uint64_t seed,
                            const ExpanderOptions& options = {});

struct EigenOptions {
  double tol = 1e-9;
  // Krylov dimension cap.
  std::size_t max_iterations = 2000;
  std::uint64_t seed = 0x5eed;
};

// Second-largest absolute eigenvalue of the walk matrix A/D: Lanczos
// iteration with the constant vector projected out, stopped once both
// extreme Ritz values have residual at most tol.
double second_eigenvalue(const RegularGraph& g, const EigenOptions& options = {});

}  // namespace gapforge::sampler
