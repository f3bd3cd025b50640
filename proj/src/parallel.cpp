#include "poincare/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace poincare::parallel {
namespace {

unsigned initial_thread_count() noexcept {
  if (const char* env = std::getenv("POINCARE_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<unsigned>& threads() noexcept {
  static std::atomic<unsigned> n{initial_thread_count()};
  return n;
}

}  // namespace

unsigned thread_count() noexcept { return threads().load(std::memory_order_relaxed); }

void set_thread_count(unsigned n) noexcept { threads().store(std::max(1u, n), std::memory_order_relaxed); }

}  // namespace poincare::parallel
