#pragma once

#include <cstddef>
#include <functional>

namespace uidiff {

/// Runs fn(0..count-1) on up to `jobs` threads (jobs <= 1 runs inline, in order).
/// The first exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace uidiff
