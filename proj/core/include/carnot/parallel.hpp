#pragma once

#include <cstddef>
#include <functional>

namespace carnot {

/// Worker count: CARNOT_THREADS when set, otherwise hardware concurrency.
int worker_count();

/// Runs fn(chunk_index, begin, end) over fixed-size chunks of [0, total).
/// Chunk boundaries do not depend on the worker count, so per-chunk partial
/// results can be combined in chunk order for reproducible reductions.
void parallel_chunks(std::size_t total, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

} // namespace carnot
