#pragma once

#include <cstddef>
#include <functional>

namespace facet {

// Runs fn(i) for every i in [0, n) across at most `jobs` threads. Work is
// split into contiguous static chunks, so which thread runs an index never
// depends on scheduling; callers write results into pre-sized slots and
// reduce sequentially afterwards. The first exception thrown by any worker
// is rethrown on the calling thread.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace facet
