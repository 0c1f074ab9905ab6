#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace gapforge {

// Splits [0, count) into at most `jobs` contiguous ranges and calls
// fn(begin, end, worker) for each. Callers reduce per-worker results in
// worker order, so the result never depends on scheduling.
template <class Fn>
void parallel_ranges(std::size_t count, unsigned jobs, Fn&& fn) {
  std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs, count));
  if (workers <= 1) {
    fn(std::size_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      std::size_t begin = count * w / workers;
      std::size_t end = count * (w + 1) / workers;
      threads.emplace_back([&, begin, end, w] {
        try {
          fn(begin, end, w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::size_t worker_count(std::size_t count, unsigned jobs) {
  return std::max<std::size_t>(1, std::min<std::size_t>(jobs, count));
}

}  // namespace gapforge
