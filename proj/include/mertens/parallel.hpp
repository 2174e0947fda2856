#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mertens {

// Dynamic work distribution over [begin, end); fn(index, worker_id) runs
// once per index.  With one thread everything stays on the caller's thread.
// The first exception thrown by any worker is rethrown after the join.
template <typename Fn>
void parallel_for_u64(uint64_t begin, uint64_t end, unsigned threads, Fn fn) {
  if (begin >= end) return;
  if (threads <= 1) {
    for (uint64_t i = begin; i < end; ++i) fn(i, 0u);
    return;
  }
  std::atomic<uint64_t> next{begin};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (;;) {
          const uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
          if (i >= end || failed.load(std::memory_order_relaxed)) break;
          fn(i, w);
        }
      } catch (...) {
        failed.store(true, std::memory_order_relaxed);
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace mertens
