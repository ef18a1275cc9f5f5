#pragma once

#include <cstddef>
#include <functional>

namespace shiftig {

// Worker count: SHIFTIG_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t thread_count();

// Calls fn(k) for k in [0, n). Work is split into contiguous chunks over at
// most thread_count() threads; fn must only write to slots owned by k.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace shiftig
