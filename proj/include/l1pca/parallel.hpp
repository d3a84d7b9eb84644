#ifndef L1PCA_PARALLEL_HPP
#define L1PCA_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace l1pca {

/// 0 means "all hardware threads".
inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(worker) for worker in [0, workers) on separate threads (the first
/// on the calling thread) and rethrows the first exception raised.
inline void run_workers(unsigned workers, const std::function<void(unsigned)>& fn) {
  workers = std::max(1u, workers);
  if (workers == 1) {
    fn(0);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  auto guarded = [&](unsigned w) {
    try {
      fn(w);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  std::vector<std::jthread> threads;
  threads.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) threads.emplace_back(guarded, w);
  guarded(0);
  threads.clear();
  if (error) std::rethrow_exception(error);
}

/// Contiguous slice [begin, end) of `count` items owned by `worker`.
struct Slice {
  std::uint64_t begin;
  std::uint64_t end;
};

inline Slice slice_for(std::uint64_t count, unsigned workers, unsigned worker) {
  const std::uint64_t base = count / workers;
  const std::uint64_t extra = count % workers;
  const std::uint64_t begin = worker * base + std::min<std::uint64_t>(worker, extra);
  return {begin, begin + base + (worker < extra ? 1 : 0)};
}

}  // namespace l1pca

#endif  // L1PCA_PARALLEL_HPP
