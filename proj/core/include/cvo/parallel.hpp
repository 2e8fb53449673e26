#pragma once

#include <cstddef>
#include <functional>

namespace cvo {

/// Runs body(i) for i in [0, n) on the current TBB arena. Callers write into
/// per-index slots and reduce serially afterwards, so results never depend on
/// the number of worker threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Runs fn inside an arena limited to num_threads workers (0 = library default).
void with_thread_limit(int num_threads, const std::function<void()>& fn);

/// Reads CVO_NUM_THREADS; returns 0 when unset or invalid.
int thread_count_from_env();

}  // namespace cvo
