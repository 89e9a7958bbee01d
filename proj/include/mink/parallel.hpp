#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mink {

/// Fixed chunking shared by the composition and Monte Carlo paths. Results
/// are produced per chunk and merged in chunk order, so they do not depend on
/// the number of workers.
struct ExecutionConfig {
  std::uint64_t term_cap = 100'000'000;
  unsigned workers = 1;
  std::uint64_t chunk_size = 1u << 14;
};

/// Runs `fn(chunk)` for chunk in [0, chunks) on up to `workers` threads and
/// returns the results indexed by chunk. The first exception thrown by any
/// chunk is rethrown after all workers stop.
template <typename Fn>
auto run_chunks(std::uint64_t chunks, unsigned workers, Fn &&fn) {
  using Result = decltype(fn(std::uint64_t{0}));
  std::vector<Result> results(chunks);
  const unsigned threads = static_cast<unsigned>(std::clamp<std::uint64_t>(chunks, 1, std::max(1u, workers)));
  if (threads <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c)
      results[c] = fn(c);
    return results;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::uint64_t c = next++; c < chunks && !failed; c = next++) {
          try {
            results[c] = fn(c);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error)
              error = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  if (error)
    std::rethrow_exception(error);
  return results;
}

} // namespace mink
