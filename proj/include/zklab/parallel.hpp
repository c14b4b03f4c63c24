#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace zk {

/// Worker cap: ZKLAB_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
inline int worker_count() {
  if (const char* env = std::getenv("ZKLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// out[i] = fn(i) for i in [0, count), evaluated on up to worker_count()
/// threads. Results are stored by index, so the output never depends on
/// scheduling. The first exception thrown by any task is rethrown.
template <typename Fn>
auto parallel_map(int count, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, int>> {
  using R = std::invoke_result_t<Fn&, int>;
  std::vector<R> out(static_cast<std::size_t>(std::max(count, 0)));
  const int workers = std::min(worker_count(), std::max(count, 1));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace zk
