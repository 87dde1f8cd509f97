#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace hyp {

/// Splits [0, n) into fixed blocks, evaluates `body(block_begin, block_end)`
/// on a pool of threads, and combines the per-block results in block order.
/// The combination order never depends on thread scheduling, so floating
/// point folds are bitwise reproducible for any thread count.
template <typename T, typename Body, typename Combine>
T deterministic_block_reduce(std::int64_t n, T init, int threads, Body body,
                             Combine combine) {
  if (n <= 0) return init;
  const int nthreads = std::max(1, threads);
  const std::int64_t block =
      std::max<std::int64_t>(1, (n + nthreads * 8 - 1) / (nthreads * 8));
  const std::int64_t nblocks = (n + block - 1) / block;
  std::vector<T> partial(static_cast<std::size_t>(nblocks), init);

  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::int64_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      const std::int64_t lo = b * block;
      const std::int64_t hi = std::min(n, lo + block);
      partial[static_cast<std::size_t>(b)] = body(lo, hi);
    }
  };

  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  T acc = init;
  for (const T& p : partial) acc = combine(acc, p);
  return acc;
}

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace hyp
