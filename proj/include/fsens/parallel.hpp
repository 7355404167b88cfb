#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fsens {

// Worker cap: FSENS_THREADS overrides hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("FSENS_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1u;
}

// Runs fn(chunk_index, begin, end) over fixed-size chunks of [0, n).
// Chunk boundaries do not depend on the worker count, so callers that
// combine per-chunk partials in chunk order get results that are
// independent of FSENS_THREADS. fn must not throw.
template <class Fn>
void for_each_chunk(std::size_t n, std::size_t chunk_size, Fn&& fn) {
  if (n == 0) return;
  const std::size_t nchunks = (n + chunk_size - 1) / chunk_size;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(thread_count(), nchunks));
  auto run_chunk = [&](std::size_t c) {
    fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
  };
  if (workers <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) run_chunk(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= nchunks) return;
        run_chunk(c);
      }
    });
  for (auto& t : pool) t.join();
}

}  // namespace fsens
