#pragma once

#include <cstddef>
#include <functional>

namespace vcd {

/// Worker cap: VCD_NUM_WORKERS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int worker_count();

/// Runs body(k) for k in [0, n) on up to `workers` threads. Each index is
/// visited exactly once; the first exception thrown is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

}  // namespace vcd
