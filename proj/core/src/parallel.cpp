#include "carnot/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace carnot {

int worker_count() {
  if (const char* env = std::getenv("CARNOT_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_chunks(std::size_t total, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (total == 0) return;
  if (chunk == 0) chunk = 1;
  const std::size_t n_chunks = (total + chunk - 1) / chunk;
  const int workers = std::min<std::size_t>(worker_count(), n_chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c)
      fn(c, c * chunk, std::min(total, (c + 1) * chunk));
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < n_chunks; c += workers)
        fn(c, c * chunk, std::min(total, (c + 1) * chunk));
    });
  for (auto& t : pool) t.join();
}

} // namespace carnot
