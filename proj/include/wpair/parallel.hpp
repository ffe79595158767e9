#pragma once

#include <functional>

namespace wpair {

/// Upper bound on worker threads; 0 means hardware concurrency.
void set_thread_cap(int threads);
int thread_cap();

/// Runs body(0..count-1) on up to thread_cap() threads. Bodies must write only
/// to their own slot so results do not depend on scheduling. The exception of
/// the lowest failing index is rethrown.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace wpair
