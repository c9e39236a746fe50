#pragma once

#include <cstddef>
#include <functional>

namespace fbp {

/// Worker count: hardware concurrency, capped by the FBP_THREADS environment variable.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads.
/// Each index is visited exactly once; body must not share mutable state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fbp
