#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace retina {

/// Maximum worker threads used by parallel_for. 0 means hardware concurrency.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs fn(i) for i in [begin, end). Tasks must be independent and write only
/// to their own output slots; the result is then identical to a sequential
/// loop regardless of thread count.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& fn);

} // namespace retina
