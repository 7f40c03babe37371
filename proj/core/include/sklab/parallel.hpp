#pragma once

#include <cstddef>
#include <functional>

namespace sklab {

/// Worker count: explicit request wins, then the SKLAB_THREADS environment
/// variable, then 1. Results never depend on the value (see parallel_blocks).
int resolve_worker_count(int requested = 0);

/// Runs fn(block_index, begin, end) over the fixed kReductionBlock-wide blocks
/// of [0, n). Blocks are claimed through an atomic cursor; each index range is
/// touched by exactly one worker, so writes to disjoint per-item or per-block
/// slots need no synchronization.
void parallel_blocks(std::size_t n, int workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace sklab
