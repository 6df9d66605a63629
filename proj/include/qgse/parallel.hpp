#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace qgse {

/// Deterministic static-partition parallel loop: body(i) for i in [0, n).
/// Each index is processed exactly once by exactly one thread; bodies must
/// not share mutable state across indices.
inline void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body) {
  const unsigned hw = std::thread::hardware_concurrency();
  const std::int64_t workers = std::min<std::int64_t>(hw == 0 ? 1 : hw, n);
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::int64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::int64_t i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace qgse
