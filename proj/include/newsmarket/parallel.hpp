#pragma once

#include <cstddef>
#include <functional>

namespace newsmarket {

// requested > 0 wins; otherwise NEWSMARKET_WORKERS, otherwise hardware concurrency.
unsigned worker_count(int requested = 0);

// Calls fn(i) for i in [0, n) on up to `workers` threads. Work items are
// claimed dynamically, so fn must only write to slot i. The first exception
// thrown is rethrown after all threads join.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace newsmarket
