#pragma once

#include <cstddef>
#include <functional>

namespace haus {

/// Worker count: HAUS_THREADS when set and positive, otherwise the hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Each index is handled
/// exactly once; results must be written to per-index slots so the outcome does not depend
/// on scheduling. The first exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace haus
