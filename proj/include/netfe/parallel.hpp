#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace netfe {

/// Worker count: NETFE_THREADS env var if set, else hardware concurrency.
inline int thread_count() {
  if (const char* env = std::getenv("NETFE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Run fn(i) for i in [0, count). Each index is processed exactly once;
/// callers must write results into per-index slots so the outcome is
/// independent of the schedule.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const int workers = thread_count();
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t nworkers = std::min<std::size_t>(workers, count);
  std::vector<std::thread> pool;
  pool.reserve(nworkers);
  for (std::size_t w = 0; w < nworkers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += nworkers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace netfe
