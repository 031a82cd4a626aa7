#pragma once

#include <cstddef>
#include <functional>

namespace ellest {

// Runs body(i) for i in [0, count) on up to `threads` threads. Indices are
// dealt in contiguous blocks; the first exception (lowest index) is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

// Number of worker threads to use for a request (<= 0 means hardware count).
int resolve_threads(int requested);

}  // namespace ellest
