#ifndef RBK_PARALLEL_HPP
#define RBK_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace rbk {

// Worker cap from RBK_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

// Runs fn(0..count-1) on up to worker_count() threads. fn must not touch
// shared mutable state; results are written per-index by the caller so the
// reduction order stays deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace rbk

#endif
