#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace factorlab {

// Evaluates fn(i) for i in [0, n) on up to `jobs` threads, one per core when
// jobs is 0. Results land at their index, so the output does not depend on
// scheduling. fn must not throw.
template <typename F>
auto parallel_map(std::size_t n, unsigned jobs, F&& fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<R> out(n);
  if (jobs == 0) jobs = std::thread::hardware_concurrency();
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n ? n : 1)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = fn(i);
    }
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        out[i] = fn(i);
      }
    });
  }
  for (auto& th : pool) {
    th.join();
  }
  return out;
}

}  // namespace factorlab
