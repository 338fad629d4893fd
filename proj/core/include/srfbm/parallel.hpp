#pragma once

#include <cstddef>
#include <functional>

namespace srfbm {

/// Worker count from SRFBM_WORKERS if set and positive, otherwise the
/// hardware concurrency (at least 1).
int default_workers();

/// Calls body(i) for every i in [0, count) on up to `workers` threads. Any
/// exception from a body is rethrown on the caller after all threads join.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace srfbm
