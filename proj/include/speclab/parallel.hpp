#pragma once

#include <cstddef>
#include <functional>

namespace speclab {

// Runs fn(i) for i in [0, n) across worker threads (hardware concurrency, capped by
// the SPECLAB_THREADS environment variable when set). Results must not depend on
// execution order; exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace speclab
