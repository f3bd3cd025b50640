#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace poincare::parallel {

/// Worker cap used by every parallel loop in the library. Defaults to the
/// POINCARE_THREADS environment variable, falling back to the hardware
/// concurrency.
unsigned thread_count() noexcept;
void set_thread_count(unsigned n) noexcept;

/// Calls fn(i) for every i in [0, n). Indices are split into contiguous
/// static chunks, so any reduction done afterwards over a per-index result
/// vector is independent of the worker count.
template <class Fn>
void for_each_index(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n / 64 + 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        try {
          for (std::size_t i = lo; i < hi; ++i) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace poincare::parallel
