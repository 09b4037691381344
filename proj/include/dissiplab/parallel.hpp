#pragma once

#include <cstddef>
#include <functional>

namespace dissiplab {

/// Worker count: hardware concurrency, capped by DISSIPLAB_THREADS when set.
unsigned thread_count();

/// Calls fn(i) for i in [0, n) on up to thread_count() threads, in contiguous
/// blocks. fn must only write to slots owned by i. The first exception thrown
/// by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace dissiplab
