#pragma once

#include <cstddef>
#include <functional>

namespace csplab {

// Runs body(0..count-1) on up to `threads` worker threads pulling indices
// from a shared atomic counter. Work items must write only to their own
// slot of any shared output, which makes results independent of the
// schedule. The first exception thrown by a work item is rethrown on the
// calling thread after all workers have stopped.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

// Worker count resolution used by the harness: the CSP_LAB_THREADS
// environment variable wins, then `configured` (0 = unset), then the
// hardware concurrency.
unsigned resolve_thread_count(unsigned configured);

}  // namespace csplab
