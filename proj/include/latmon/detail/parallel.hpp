#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace latmon::detail {

/// Chunked parallel loop over [0, n); fn must be safe to call concurrently
/// with distinct indices (all latmon evaluators are pure).
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned max_threads = 0) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 4;
  if (max_threads != 0 && max_threads < hw) hw = max_threads;
  if (n < 2 || hw < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const std::size_t chunk = std::max<std::size_t>(1, n / (hw * 8));
  auto worker = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= n) return;
      const std::size_t end = std::min(n, begin + chunk);
      for (std::size_t i = begin; i < end; ++i) fn(i);
    }
  };
  pool.reserve(hw);
  for (unsigned t = 0; t < hw; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace latmon::detail
