#ifndef GRAPHON_LDP_PARALLEL_H_
#define GRAPHON_LDP_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace graphon_ldp {

// Worker count: GRAPHON_LDP_THREADS if set to a positive integer, otherwise
// std::thread::hardware_concurrency() (at least 1).
std::size_t ThreadCount();

// Calls body(i) for every i in [0, count). Each index is processed exactly once;
// callers write results into per-index slots so the outcome is independent of
// scheduling. The first exception thrown by any body is rethrown.
void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace graphon_ldp

#endif  // GRAPHON_LDP_PARALLEL_H_
