#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace alscan {

/// Splits [0, count) into at most `workers` contiguous blocks and runs
/// fn(lo, hi) for each block on its own thread.
///
/// Results written to per-index slots are independent of scheduling. The
/// exception from the lowest failing block is rethrown after all workers
/// join.
template <class Fn>
void parallel_blocks(std::size_t count, unsigned workers, Fn&& fn) {
  const std::size_t threads =
      std::min<std::size_t>(std::max(1u, workers), count);
  if (threads <= 1) {
    if (count > 0) fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    const std::size_t block = (count + threads - 1) / threads;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        const std::size_t lo = w * block;
        const std::size_t hi = std::min(count, lo + block);
        try {
          if (lo < hi) fn(lo, hi);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Runs fn(i) for every i in [0, count); see parallel_blocks.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  parallel_blocks(count, workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) fn(i);
  });
}

/// Worker count used when a caller passes 0.
inline unsigned default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace alscan
