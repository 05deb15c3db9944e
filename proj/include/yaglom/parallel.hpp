#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace yaglom::par {

// Global worker count. Results are bit-identical for every setting by
// construction: work is partitioned into fixed-size blocks that do not depend
// on the thread count, and all reductions combine per-block results in index
// order on the calling thread.
int thread_count();
void set_thread_count(int n);

// Calls fn(begin, end) for consecutive ranges covering [0, n).
// Block boundaries depend only on n and block_size.
void parallel_blocks(std::size_t n, std::size_t block_size,
                     const std::function<void(std::size_t, std::size_t)>& fn);

// parallel_blocks with a default block size suited to pointwise field loops.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

// Deterministic blocked sum/mean (fixed 8192-element blocks, serial combine).
double deterministic_sum(std::span<const double> v);
double deterministic_mean(std::span<const double> v);

}  // namespace yaglom::par
