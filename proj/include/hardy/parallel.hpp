#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace hardy {

inline unsigned default_jobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

/// Run fn(i) for i in [0, n) on up to `jobs` workers. Work items must be
/// independent; callers keep results in pre-sized slots so the outcome is
/// order-independent.
template <typename Fn>
void parallel_for_indexed(std::size_t n, unsigned jobs, const Fn& fn) {
  if (n == 0) return;
  if (jobs <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  unsigned count = jobs < n ? jobs : static_cast<unsigned>(n);
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace hardy
