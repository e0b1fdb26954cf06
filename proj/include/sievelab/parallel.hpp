#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sievelab {

/// Worker count: SIEVELAB_THREADS when set (must be a positive integer),
/// otherwise the hardware concurrency. Never less than 1.
std::size_t worker_count();

/// Parses a SIEVELAB_THREADS-style value; throws std::invalid_argument.
std::size_t parse_worker_count(const char* text);

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Work is handed
/// out by index; callers write into pre-sized slots so results never depend on
/// scheduling. The exception thrown for the lowest index is rethrown.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t nthreads = workers < count ? workers : count;
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = count;

  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(nthreads - 1);
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace sievelab
