#pragma once

#include <cstddef>
#include <functional>

namespace hillwave {

/// Worker count: the value passed to set_threads, else HILLWAVE_THREADS, else the hardware count.
int thread_count();
void set_threads(int n);

/// Runs body(i) for i in [0, n); the first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hillwave
