#pragma once

#include <cstddef>
#include <functional>

namespace mvboot {

// Worker count: MVBOOT_THREADS when set to a positive integer, otherwise the
// hardware concurrency. Results never depend on it.
std::size_t worker_count();

// Calls body(i) for every i in [0, count), split into contiguous chunks over
// worker_count() threads. If any call throws, the exception from the lowest
// failing index is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace mvboot
