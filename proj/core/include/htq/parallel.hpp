#pragma once

#include <functional>

namespace htq {

/// Worker count: HTQ_THREADS if set to a positive integer, else the hardware concurrency.
int default_thread_count();

/// Runs body(0..count-1) on up to `threads` workers (0 = default_thread_count()).
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(int count, const std::function<void(int)>& body, int threads = 0);

}  // namespace htq
