#include "sklab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "sklab/summation.hpp"

namespace sklab {

int resolve_worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SKLAB_THREADS")) {
    char* end = nullptr;
    long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0 && value <= 1024) return static_cast<int>(value);
  }
  return 1;
}

void parallel_blocks(std::size_t n, int workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  const std::size_t n_blocks = reduction_block_count(n);
  if (n_blocks == 0) return;

  auto run_block = [&](std::size_t b) {
    const std::size_t begin = b * kReductionBlock;
    const std::size_t end = std::min(begin + kReductionBlock, n);
    fn(b, begin, end);
  };

  if (workers <= 1 || n_blocks == 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
    return;
  }

  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t b = cursor.fetch_add(1, std::memory_order_relaxed);
      if (b >= n_blocks) return;
      run_block(b);
    }
  };

  const int n_threads = static_cast<int>(std::min<std::size_t>(workers, n_blocks));
  std::vector<std::thread> pool;
  pool.reserve(n_threads - 1);
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

}  // namespace sklab
