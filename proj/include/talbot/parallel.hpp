#pragma once

#include <cstddef>
#include <functional>

namespace talbot {

// Worker count: TALBOT_THREADS if set (clamped to [1,256]), else
// hardware_concurrency. This environment variable is the only process-level
// knob; everything else comes through explicit configuration.
unsigned thread_count();

// Runs fn(i) for i in [0,n) on thread_count() threads with a static block
// partition. fn must write only to slots indexed by i, which keeps results
// identical to the serial order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace talbot
