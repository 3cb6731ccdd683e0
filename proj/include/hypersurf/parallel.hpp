#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace hypersurf {

// Runs f(i) for i in [0, n) across OpenMP threads. The first exception thrown
// by any iteration is rethrown on the calling thread.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  std::exception_ptr error;
  std::mutex error_mutex;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < count; ++i) {
    {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (error) continue;
    }
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

// Caps the worker count; 0 keeps the runtime default.
void set_thread_count(int threads);

}  // namespace hypersurf
