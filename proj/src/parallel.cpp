#include "surftrack/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace surftrack {

int worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

void parallel_for(int begin, int end, const std::function<void(int, int)>& fn,
                  int min_grain) {
  const int count = end - begin;
  if (count <= 0) return;
  int threads = std::min(worker_count(), (count + min_grain - 1) / min_grain);
  if (threads <= 1) {
    fn(begin, end);
    return;
  }
  const int chunk = (count + threads - 1) / threads;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    int lo = begin + t * chunk;
    int hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace surftrack
