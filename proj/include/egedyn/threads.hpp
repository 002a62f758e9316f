#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace ege {

// --threads K / EGEDYN_THREADS / hardware concurrency, in that order.
int resolve_threads(int requested);

// Runs fn(chunk_index, begin, end) over [0, total) split into fixed-size
// chunks. Chunk boundaries depend only on `total` and `chunk_size`, never on
// the worker count, and each chunk writes results into its own slot, so any
// reduction done in chunk order is bitwise independent of thread scheduling.
void parallel_chunks(long total, long chunk_size, int threads,
                     const std::function<void(long, long, long)>& fn);

inline long num_chunks(long total, long chunk_size) {
  return (total + chunk_size - 1) / chunk_size;
}

}  // namespace ege
