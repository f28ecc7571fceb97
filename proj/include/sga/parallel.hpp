#pragma once

#include <cstddef>
#include <functional>

namespace sga {

// Max worker threads for data-parallel kernels. Reads SGA_THREADS once
// (values < 1 fall back to hardware concurrency).
int max_threads();

// Runs fn(i) for i in [begin, end). Work is split into contiguous chunks,
// one per worker; each index is processed exactly once, so any schedule
// with disjoint writes is deterministic.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn);

} // namespace sga
