#pragma once

// Deterministic parallel-for: work items are indexed, each worker claims the
// next index from a shared counter, and results must be written to
// pre-allocated slots keyed by index. Output is therefore identical for any
// thread count. STRATA_SYNTH_THREADS caps the default worker count.

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace strata {

// Worker count after applying the STRATA_SYNTH_THREADS cap; n_threads <= 0
// means "use hardware concurrency".
int resolve_threads(int n_threads = 0);

// Runs fn(i) for i in [0, n). Exceptions from workers are rethrown (first one
// by index order) after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int n_threads = 0);

}  // namespace strata
