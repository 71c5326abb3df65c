#pragma once

#include <cstddef>
#include <functional>

namespace hosf {

// Worker cap: HOSF_THREADS if set (>=1), otherwise hardware concurrency.
int max_threads();

// Runs fn(i) for i in [0,n). Work items must be independent and write to
// disjoint locations; results are then identical for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hosf
