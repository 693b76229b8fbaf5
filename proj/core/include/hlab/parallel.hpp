#pragma once

#include <cstdint>
#include <functional>

namespace hlab {

/// Number of workers to use when the caller passes 0 (hardware count,
/// HARNACK_LAB_THREADS overrides).
int default_thread_count();

/// Runs body(i) for i in [0, count) split across `threads` workers in
/// contiguous chunks. Work items must be independent; body typically
/// writes into a preallocated slot per index, which keeps every
/// downstream reduction identical across worker counts. Exceptions from
/// workers are rethrown on the calling thread.
void parallel_for(int threads, std::int64_t count,
                  const std::function<void(std::int64_t)>& body);

}  // namespace hlab
