#include "cvo/parallel.hpp"

#include <cstdlib>
#include <string>

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

namespace cvo {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n, 64),
                    [&](const tbb::blocked_range<std::size_t>& r) {
                      for (std::size_t i = r.begin(); i != r.end(); ++i) body(i);
                    });
}

void with_thread_limit(int num_threads, const std::function<void()>& fn) {
  if (num_threads <= 0) {
    fn();
    return;
  }
  // Explicit requests may exceed the detected core count.
  tbb::global_control allow(tbb::global_control::max_allowed_parallelism,
                            static_cast<std::size_t>(num_threads));
  tbb::task_arena arena(num_threads);
  arena.execute(fn);
}

int thread_count_from_env() {
  const char* raw = std::getenv("CVO_NUM_THREADS");
  if (raw == nullptr) return 0;
  try {
    const int n = std::stoi(raw);
    return n > 0 ? n : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace cvo
