#ifndef SPECSENSE_PARALLEL_HPP_
#define SPECSENSE_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace specsense {

// Worker count: min(SPECSENSE_THREADS if set, hardware_concurrency), >= 1.
// The env var is re-read on every call so tests can vary it in-process.
std::size_t worker_count();

// Runs fn(i) for i in [0, n) split into contiguous chunks, one per worker.
// Results must be written to per-index slots; with counter-based RNG
// streams keyed by i the outcome is identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace specsense

#endif  // SPECSENSE_PARALLEL_HPP_
