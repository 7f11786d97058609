#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace turbmom {

/// Run fn(i) for i in [0, n) on up to `workers` threads.
///
/// Each index owns its output slot, so results are identical for any worker
/// count; reductions over the outputs must be done by the caller in index
/// order to stay bit-reproducible.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (std::size_t t = 0; t < nw; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = t; i < n; i += nw) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

} // namespace turbmom
