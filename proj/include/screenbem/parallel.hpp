#pragma once

#include <cstddef>
#include <functional>

namespace screenbem {

// Worker count used by assembly and evaluation loops. Initialised from
// SCREENBEM_THREADS when set, otherwise hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

// Runs body(i) for i in [0, n). Each index is handled by exactly one worker,
// so writers that own disjoint outputs need no synchronisation. Results do
// not depend on the number of workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace screenbem
