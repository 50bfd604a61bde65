#pragma once

#include <cstddef>
#include <functional>

namespace mgap {

// Runs chunk_fn over contiguous index ranges [begin, end) covering
// [0, count). Chunk boundaries depend only on count and workers; per-index
// work must not communicate across indices, which keeps every result
// bit-identical no matter how many workers execute it.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t, std::size_t)>& chunk_fn);

}  // namespace mgap
