#include "gapforge/oracle/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "gapforge/error.hpp"
#include "gapforge/parallel.hpp"
#include "gapforge/random.hpp"

namespace gapforge::oracle {

double chernoff_tail(ChernoffForm form, const Rational& mu, const Rational& delta, std::size_t n) {
  require(mu >= 0 && mu <= 1, ErrorKind::invalid_argument, "mu must lie in [0,1]");
  double m = to_double(mu) * static_cast<double>(n);
  double d = to_double(delta);
  switch (form) {
    case ChernoffForm::upper:
      require(delta > 0, ErrorKind::invalid_argument, "upper form needs delta > 0");
      return delta <= 1 ? std::exp(-d * d * m / 3.0) : std::exp(-d * m / 3.0);
    case ChernoffForm::lower:
      require(delta > 0 && delta <= 1, ErrorKind::invalid_argument, "lower form needs 0 < delta <= 1");
      return std::exp(-d * d * m / 2.0);
    case ChernoffForm::upper_large:
      require(delta >= 2, ErrorKind::invalid_argument, "second bound needs delta >= 2");
      return std::exp(m * (d - (1.0 + d) * std::log1p(d)));
  }
  return 1.0;
}

LllReport lll_condition(double p, std::size_t dependency_degree) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::invalid_argument, "p must lie in [0,1]");
  double value = p * std::numbers::e * static_cast<double>(dependency_degree + 1);
  return {value, value <= 1.0 + 4 * std::numeric_limits<double>::epsilon()};
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  require(trials > 0, ErrorKind::invalid_argument, "interval needs at least one trial");
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double centre = (p + z2 / (2 * n)) / denom;
  double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  double low = successes == 0 ? 0.0 : std::clamp(centre - half, 0.0, 1.0);
  double high = successes == trials ? 1.0 : std::clamp(centre + half, 0.0, 1.0);
  return {low, high};
}

Estimate estimate(const SeededEvent& event, std::size_t trials, std::uint64_t master, unsigned jobs) {
  require(trials > 0, ErrorKind::invalid_argument, "estimate needs at least one trial");
  std::vector<std::size_t> hits(worker_count(trials, jobs), 0);
  parallel_ranges(trials, jobs, [&](std::size_t begin, std::size_t end, std::size_t w) {
    for (std::size_t i = begin; i < end; ++i) hits[w] += event(derive_seed(master, i)) ? 1 : 0;
  });
  Estimate out;
  for (auto h : hits) out.successes += h;
  out.trials = trials;
  out.frequency = static_cast<double>(out.successes) / static_cast<double>(trials);
  out.interval = wilson_interval(out.successes, trials);
  return out;
}

}  // namespace gapforge::oracle
