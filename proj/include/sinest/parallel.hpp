#pragma once

#include <cstddef>
#include <functional>

namespace sinest {

/// Runs body(0..count-1) on up to `threads` workers (0 = hardware count).
/// Indices are handed out in order; the first exception is rethrown after all
/// workers stop.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace sinest
