#include "gapforge/sampler/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gapforge/error.hpp"
#include "gapforge/random.hpp"

namespace gapforge::sampler {

const char* to_string(GraphModel model) {
  return model == GraphModel::configuration ? "configuration" : "simple";
}

RegularGraph::RegularGraph(std::size_t degree, std::vector<std::vector<std::size_t>> adjacency)
    : degree_(degree), adjacency_(std::move(adjacency)) {
  std::size_t n = adjacency_.size();
  std::vector<std::vector<std::size_t>> check(n);
  for (std::size_t v = 0; v < n; ++v) {
    require(adjacency_[v].size() == degree_, ErrorKind::malformed_instance,
            "vertex " + std::to_string(v) + " does not have degree " + std::to_string(degree_));
    for (auto u : adjacency_[v]) {
      require(u < n, ErrorKind::malformed_instance, "neighbor index out of range");
    }
    check[v] = adjacency_[v];
    std::sort(check[v].begin(), check[v].end());
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (auto it = check[v].begin(); it != check[v].end();) {
      auto u = *it;
      auto run = std::upper_bound(it, check[v].end(), u) - it;
      if (u != v) {
        auto back = std::equal_range(check[u].begin(), check[u].end(), v);
        require(back.second - back.first == run, ErrorKind::malformed_instance,
                "adjacency is not symmetric");
      } else {
        require(run % 2 == 0, ErrorKind::malformed_instance, "loops must appear twice");
      }
      it += run;
    }
  }
}

bool RegularGraph::connected() const {
  if (adjacency_.empty()) return true;
  std::vector<char> seen(size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto u : adjacency_[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == size();
}

bool RegularGraph::simple() const {
  for (std::size_t v = 0; v < size(); ++v) {
    auto nb = adjacency_[v];
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) return false;
    if (std::binary_search(nb.begin(), nb.end(), v)) return false;
  }
  return true;
}

RegularGraph complete_graph(std::size_t n) {
  require(n >= 2, ErrorKind::invalid_argument, "complete graph needs n >= 2");
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u = 0; u < n; ++u) {
      if (u != v) adj[v].push_back(u);
    }
  }
  return RegularGraph(n - 1, std::move(adj));
}

RegularGraph disjoint_union(const RegularGraph& a, const RegularGraph& b) {
  require(a.degree() == b.degree(), ErrorKind::invalid_argument, "union needs equal degrees");
  auto adj = a.adjacency();
  for (const auto& nb : b.adjacency()) {
    auto shifted = nb;
    for (auto& u : shifted) u += a.size();
    adj.push_back(std::move(shifted));
  }
  return RegularGraph(a.degree(), std::move(adj));
}

namespace {

std::vector<std::vector<std::size_t>> pairing(std::size_t n, std::size_t degree, Rng& rng) {
  std::vector<std::size_t> points(n * degree);
  for (std::size_t i = 0; i < points.size(); ++i) points[i] = i / degree;
  std::shuffle(points.begin(), points.end(), rng);
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < points.size(); i += 2) {
    adj[points[i]].push_back(points[i + 1]);
    adj[points[i + 1]].push_back(points[i]);
  }
  return adj;
}

class EdgeSet {
 public:
  explicit EdgeSet(std::size_t n) : n_(n), words_((n * n + 63) / 64, 0) {}
  bool has(std::size_t u, std::size_t v) const {
    auto i = u * n_ + v;
    return (words_[i / 64] >> (i % 64)) & 1U;
  }
  void put(std::size_t u, std::size_t v, bool value) {
    set_bit(u * n_ + v, value);
    set_bit(v * n_ + u, value);
  }

 private:
  void set_bit(std::size_t i, bool value) {
    auto bit = std::uint64_t{1} << (i % 64);
    if (value) {
      words_[i / 64] |= bit;
    } else {
      words_[i / 64] &= ~bit;
    }
  }
  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

std::vector<std::vector<std::size_t>> switched_circulant(std::size_t n, std::size_t degree, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t off = 1; off <= degree / 2; ++off) edges.emplace_back(v, (v + off) % n);
    if (degree % 2 == 1 && v < n / 2) edges.emplace_back(v, v + n / 2);
  }
  EdgeSet present(n);
  for (auto [u, v] : edges) present.put(u, v, true);
  std::size_t swaps = 20 * edges.size() + 100;
  for (std::size_t s = 0; s < swaps; ++s) {
    auto i = uniform_index(rng, edges.size());
    auto j = uniform_index(rng, edges.size());
    if (i == j) continue;
    auto [a, b] = edges[i];
    auto [c, d] = edges[j];
    if (rng() & 1U) std::swap(c, d);
    if (a == c || b == d || a == d || b == c) continue;
    if (present.has(a, c) || present.has(b, d)) continue;
    present.put(a, b, false);
    present.put(c, d, false);
    present.put(a, c, true);
    present.put(b, d, true);
    edges[i] = {a, c};
    edges[j] = {b, d};
  }
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

}  // namespace

RegularGraph build_expander(std::size_t n, std::size_t degree, std::uint64_t seed,
                            const ExpanderOptions& options) {
  require(degree >= 3, ErrorKind::invalid_argument, "expander degree must be at least 3");
  require((n * degree) % 2 == 0, ErrorKind::invalid_argument, "N*D must be even");
  if (options.model == GraphModel::simple) {
    require(degree < n, ErrorKind::invalid_argument, "a simple D-regular graph needs D < N");
    require(n <= 16384, ErrorKind::resource_cap, "simple model limited to 16384 vertices");
  }
  for (std::size_t attempt = 0; attempt < options.max_attempts; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    auto adj = options.model == GraphModel::configuration ? pairing(n, degree, rng)
                                                          : switched_circulant(n, degree, rng);
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    RegularGraph g(degree, std::move(adj));
    if (g.connected()) return g;
  }
  fail(ErrorKind::infeasible, "no connected graph after " + std::to_string(options.max_attempts) + " attempts");
}

double second_eigenvalue(const RegularGraph& g, const EigenOptions& options) {
  std::size_t n = g.size();
  require(n >= 2, ErrorKind::invalid_argument, "spectrum needs at least two vertices");
  double inv_degree = 1.0 / static_cast<double>(g.degree());
  auto walk = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
    for (std::size_t v = 0; v < n; ++v) {
      double s = 0.0;
      for (auto u : g.neighbors(v)) s += in[static_cast<Eigen::Index>(u)];
      out[static_cast<Eigen::Index>(v)] = s * inv_degree;
    }
  };
  auto center = [](Eigen::VectorXd& x) { x.array() -= x.mean(); };

  // Lanczos on the walk matrix restricted to the complement of the constant
  // vector, with full reorthogonalization.
  std::size_t limit = std::min(options.max_iterations, n - 1);
  Rng rng(options.seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd q(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = gauss(rng);
  center(q);
  q.normalize();
  std::vector<Eigen::VectorXd> basis{q};
  std::vector<double> alpha, beta;
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  double estimate = 0.0;
  for (std::size_t k = 1; k <= limit; ++k) {
    walk(basis.back(), w);
    center(w);
    alpha.push_back(basis.back().dot(w));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) w -= b.dot(w) * b;
    }
    double next = w.norm();

    bool check = k == limit || next < 1e-13 || k % 4 == 0;
    if (check) {
      auto m = static_cast<Eigen::Index>(k);
      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub = Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const auto& values = tri.eigenvalues();
      const auto& vectors = tri.eigenvectors();
      Eigen::Index top = std::abs(values[m - 1]) >= std::abs(values[0]) ? m - 1 : 0;
      estimate = std::abs(values[top]);
      double residual = next * std::abs(vectors(m - 1, top));
      double other = next * std::abs(vectors(m - 1, top == 0 ? m - 1 : 0));
      bool exhausted = next < 1e-13 || k == n - 1;
      if (exhausted || (residual <= options.tol && other <= options.tol)) return estimate;
    }
    if (k == limit) break;
    beta.push_back(next);
    basis.push_back(w / next);
  }
  throw ConvergenceError(limit, estimate);
}

}  // namespace gapforge::sampler
