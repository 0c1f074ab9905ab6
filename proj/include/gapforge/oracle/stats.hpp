#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "gapforge/rational.hpp"

namespace gapforge::oracle {

enum class ChernoffForm {
  // Pr[X > (1+d)mu]: exp(-d^2 mu n / 3) for 0 < d <= 1, exp(-d mu n / 3) for d > 1.
  upper,
  // Pr[X < (1-d)mu] <= exp(-d^2 mu n / 2) for 0 < d <= 1.
  lower,
  // Pr[X > (1+d)mu] <= (e^d / (1+d)^(1+d))^(mu n) for d >= 2.
  upper_large,
};

// mu is the per-variable mean, n the number of variables.
double chernoff_tail(ChernoffForm form, const Rational& mu, const Rational& delta, std::size_t n);

struct LllReport {
  double value = 0.0;
  bool holds = false;
};

// p e (d+1) and whether it is at most 1 (up to rounding in the last place).
LllReport lll_condition(double p, std::size_t dependency_degree);

inline constexpr double kZ99 = 2.5758293035489004;

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

Interval wilson_interval(std::size_t successes, std::size_t trials, double z = kZ99);

struct Estimate {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double frequency = 0.0;
  Interval interval;
};

using SeededEvent = std::function<bool(std::uint64_t seed)>;

// Runs event(derive_seed(master, i)) for i < trials.
Estimate estimate(const SeededEvent& event, std::size_t trials, std::uint64_t master, unsigned jobs = 1);

}  // namespace gapforge::oracle
