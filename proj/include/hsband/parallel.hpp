// Tiny fork-join helper for loops whose iterations are independent. Results
// must be written to per-index slots; with that discipline the outcome is
// identical for any worker count.
#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace hsband {

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t workers = hw ? hw : 1;
  if (workers > n) workers = n;
  if (workers <= 1 || n < 2 * workers) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace hsband
