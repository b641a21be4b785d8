#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace dilatation {

namespace detail {
inline double nan_to_inf(double v) {
  return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
}
}  // namespace detail

/// Worker count for sweeps: DILATATION_LAB_THREADS if set (>= 1), otherwise
/// the hardware concurrency.
inline std::size_t worker_count() {
  if (const char* env = std::getenv("DILATATION_LAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (...) {
    }
    return 1;
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Evaluates f(i) for i in [0, n) and returns the maximum. Max is order
/// independent, so the result does not depend on the thread count.
/// If any evaluation throws, the exception of the lowest failing index is
/// rethrown, again independent of scheduling.
/// NaN values count as +inf so a broken evaluation cannot vanish from the max.
template <class F>
double parallel_max(std::size_t n, F&& f, std::size_t threads = worker_count()) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, detail::nan_to_inf(f(i)));
    return m;
  }
  // A worker stops at its first failure, so indices it would have visited
  // later are skipped; a lower failing index on another worker still wins.
  std::vector<double> partial(threads, 0.0);
  std::exception_ptr error;
  std::size_t error_index = n;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) {
        try {
          partial[t] = std::max(partial[t], detail::nan_to_inf(f(i)));
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (i < error_index) {
            error_index = i;
            error = std::current_exception();
          }
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return *std::max_element(partial.begin(), partial.end());
}

}  // namespace dilatation
