#pragma once

#include <cstddef>
#include <functional>

namespace rfid {

// Worker cap shared by every parallel loop in the library. Zero means "use
// the hardware concurrency". Results never depend on this value.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, n). Iterations must write to disjoint outputs.
// The first exception thrown by any iteration is rethrown after all workers
// have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rfid
