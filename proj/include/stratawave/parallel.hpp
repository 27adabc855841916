#pragma once

#include <cstddef>
#include <functional>

namespace stratawave {

// Worker cap: STRATAWAVE_THREADS if set (>= 1), otherwise the hardware count.
unsigned thread_limit();

// Calls fn(i) for i in [0, n). Iterations must be independent; results are
// identical for any thread count because each index writes its own slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace stratawave
