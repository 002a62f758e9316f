#include "egedyn/threads.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace ege {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("EGEDYN_THREADS")) {
    const int k = std::atoi(env);
    if (k > 0) return k;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

void parallel_chunks(long total, long chunk_size, int threads,
                     const std::function<void(long, long, long)>& fn) {
  if (total <= 0) return;
  const long chunks = num_chunks(total, chunk_size);
  const auto run_chunk = [&](long c) {
    const long begin = c * chunk_size;
    const long end = std::min(total, begin + chunk_size);
    fn(c, begin, end);
  };
  if (threads <= 1 || chunks == 1) {
    for (long c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  const int workers = int(std::min<long>(threads, chunks));
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (long c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) run_chunk(c);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace ege
