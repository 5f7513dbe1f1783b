#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace irsim {

/// Runs fn(i) for i in [0, n) across the given number of workers (0 = one
/// per hardware thread). Callers write results into index-addressed slots,
/// so the outcome is independent of the partition.
inline void parallel_for(std::size_t n, unsigned workers,
                         const std::function<void(std::size_t)>& fn) {
  if (workers == 0) workers = std::thread::hardware_concurrency();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t used = std::min<std::size_t>(workers, n);
  std::vector<std::thread> pool;
  pool.reserve(used);
  for (std::size_t w = 0; w < used; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += used) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace irsim
