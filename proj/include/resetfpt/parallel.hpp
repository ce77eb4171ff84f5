#pragma once

#include <cstddef>
#include <functional>

namespace resetfpt {

/// Worker count: hardware concurrency, capped by RESET_FPT_THREADS when set.
unsigned worker_count();

/// Calls body(i) for i in [0, n) on up to worker_count() threads. Each index
/// runs exactly once; the first exception thrown is rethrown after all
/// workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace resetfpt
