#pragma once

#include <cstddef>
#include <functional>

namespace gabor {

/// Process-wide worker count for data-parallel loops. 0 means "use
/// hardware concurrency". Set once at startup (CLI --threads); results
/// are independent of the value by construction: work items write to
/// disjoint slots and reductions run serially afterwards.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs fn(i) for i in [0, n). Partitioned into contiguous chunks.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace gabor
