#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace stlkernel {

/// Run fn(i) for i in [0, count) on up to hardware_concurrency threads.
/// Work items must be independent; the first exception is rethrown.
inline void parallel_for(int count, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  unsigned threads = std::thread::hardware_concurrency();
  if (threads < 1) threads = 1;
  if (static_cast<int>(threads) > count) threads = static_cast<unsigned>(count);
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace stlkernel
