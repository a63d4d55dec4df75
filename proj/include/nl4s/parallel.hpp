#pragma once

#include <cstddef>
#include <functional>

namespace nl4s {

// NL4S_THREADS caps the worker count; 0 or unset means hardware_concurrency.
int thread_count();

// Runs fn(i) for i in [0, n). Work is split into contiguous blocks, so any
// output written per index is independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace nl4s
