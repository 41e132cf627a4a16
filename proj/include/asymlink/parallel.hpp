#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace asymlink {

/// Global worker count for block-parallel loops (1 = serial). Results must not
/// depend on it: work is split into a fixed block structure and reduced in
/// block order regardless of which thread ran which block.
int worker_count();
void set_worker_count(int w);

/// Runs fn(block) for block = 0..nblocks-1 on up to worker_count() threads.
/// Exceptions are captured and rethrown (first block wins, deterministically).
void parallel_blocks(int nblocks, const std::function<void(int)>& fn);

/// Deterministic pairwise tree sum (order independent of thread count).
double pairwise_sum(std::vector<double> xs);

}  // namespace asymlink
