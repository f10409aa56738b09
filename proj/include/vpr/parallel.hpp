#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vpr {

inline int default_jobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : int(n);
}

/// Run fn(task_index) for task_index in [0, task_count) on up to `jobs`
/// threads. Task granularity is fixed by the caller, so any reduction that
/// combines per-task results in task order is independent of the worker
/// count and of scheduling. First exception is rethrown on the caller.
template <typename Fn>
void parallel_tasks(size_t task_count, int jobs, Fn&& fn) {
  if (task_count == 0) return;
  if (jobs < 1) jobs = 1;
  size_t workers = std::min<size_t>(size_t(jobs), task_count);
  if (workers <= 1) {
    for (size_t i = 0; i < task_count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    while (true) {
      size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= task_count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Split [0, n) into chunks of `chunk` elements and run fn(begin, end) per
/// chunk in parallel. Chunk boundaries depend only on (n, chunk).
template <typename Fn>
void parallel_chunks(size_t n, size_t chunk, int jobs, Fn&& fn) {
  if (n == 0) return;
  size_t count = (n + chunk - 1) / chunk;
  parallel_tasks(count, jobs, [&](size_t c) {
    size_t b = c * chunk;
    fn(b, std::min(n, b + chunk));
  });
}

}  // namespace vpr
