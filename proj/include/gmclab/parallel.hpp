#pragma once

#include <cstddef>
#include <functional>

namespace gmclab {

// Worker count used when a caller passes jobs = 0. Starts at 1.
void set_default_jobs(unsigned jobs);
unsigned default_jobs();

// Calls fn(i) for i in [0, n) across `jobs` threads. Indices are handed out in
// contiguous blocks, so results written to slot i are independent of the
// thread count. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned jobs = 0);

}  // namespace gmclab
