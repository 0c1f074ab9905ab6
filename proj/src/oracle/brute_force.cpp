#include "gapforge/oracle/brute_force.hpp"

#include <bit>
#include <chrono>
#include <string>
#include <vector>

#include "gapforge/error.hpp"
#include "gapforge/parallel.hpp"

namespace gapforge::oracle {

namespace {

struct Occurrence {
  std::uint32_t clause;
  std::uint32_t weight;
};

struct Best {
  std::size_t satisfied = 0;
  std::uint64_t x = 0;
  bool found = false;

  void offer(std::size_t count, std::uint64_t candidate) {
    if (!found || count > satisfied || (count == satisfied && candidate < x)) {
      satisfied = count;
      x = candidate;
      found = true;
    }
  }
};

class GrayScanner {
 public:
  explicit GrayScanner(const csp::CspInstance& inst) : inst_(inst), occ_(inst.num_vars()) {
    for (std::size_t j = 0; j < inst.clause_count(); ++j) {
      const auto& scope = inst.clause(j).scope();
      for (std::size_t k = 0; k < scope.size(); ++k) {
        auto weight = std::uint32_t{1} << (scope.size() - 1 - k);
        occ_[scope[k]].push_back({static_cast<std::uint32_t>(j), weight});
      }
    }
  }

  // Scans the 2^low assignments whose bits >= low equal those of `base`.
  Best scan(std::uint64_t base, std::size_t low) const {
    std::vector<std::uint32_t> index(inst_.clause_count());
    std::size_t satisfied = 0;
    for (std::size_t j = 0; j < inst_.clause_count(); ++j) {
      std::uint32_t idx = 0;
      for (auto v : inst_.clause(j).scope()) idx = (idx << 1) | static_cast<std::uint32_t>((base >> v) & 1U);
      index[j] = idx;
      satisfied += inst_.clause(j).value_at(idx) ? 1 : 0;
    }
    Best best;
    std::uint64_t x = base;
    best.offer(satisfied, x);
    std::uint64_t steps = std::uint64_t{1} << low;
    for (std::uint64_t i = 1; i < steps; ++i) {
      auto v = static_cast<std::size_t>(std::countr_zero(i));
      x ^= std::uint64_t{1} << v;
      for (const auto& o : occ_[v]) {
        const auto& c = inst_.clause(o.clause);
        bool before = c.value_at(index[o.clause]);
        index[o.clause] ^= o.weight;
        bool after = c.value_at(index[o.clause]);
        satisfied += after;
        satisfied -= before;
      }
      best.offer(satisfied, x);
    }
    return best;
  }

 private:
  const csp::CspInstance& inst_;
  std::vector<std::vector<Occurrence>> occ_;
};

}  // namespace

OracleReport brute_force_opt(const csp::CspInstance& inst, const OracleOptions& options) {
  auto start = std::chrono::steady_clock::now();
  std::size_t n = inst.num_vars();
  if (n > options.cap || n > 40) {
    fail(ErrorKind::resource_cap,
         "brute force over " + std::to_string(n) + " variables exceeds cap " + std::to_string(options.cap));
  }
  std::size_t high = 0;
  while (high < n && (std::size_t{1} << high) < options.jobs) ++high;
  std::size_t low = n - high;
  std::size_t blocks = std::size_t{1} << high;

  GrayScanner scanner(inst);
  std::vector<Best> per_worker(worker_count(blocks, options.jobs));
  parallel_ranges(blocks, options.jobs, [&](std::size_t begin, std::size_t end, std::size_t w) {
    Best best;
    for (std::size_t b = begin; b < end; ++b) {
      auto found = scanner.scan(static_cast<std::uint64_t>(b) << low, low);
      best.offer(found.satisfied, found.x);
    }
    per_worker[w] = best;
  });
  Best best;
  for (const auto& b : per_worker) best.offer(b.satisfied, b.x);

  OracleReport report;
  report.satisfied = best.satisfied;
  report.optimum = inst.degenerate()
                       ? Rational(1)
                       : Rational(static_cast<std::int64_t>(best.satisfied),
                                  static_cast<std::int64_t>(inst.clause_count()));
  report.argmax = Assignment(n);
  for (std::size_t v = 0; v < n; ++v) report.argmax.set(v, (best.x >> v) & 1U);
  report.enumerated = std::uint64_t{1} << n;
  report.degenerate = n == 0 || inst.degenerate();
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace gapforge::oracle
