#pragma once

#include <cstddef>
#include <functional>

namespace bohr {

/// Cap on worker threads; 0 means hardware concurrency.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs body(i) for i in [0, n). Callers write results into per-index
/// slots, so output never depends on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bohr
