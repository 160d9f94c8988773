#include "hdfe/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hdfe {

int worker_count() {
  if (const char* env = std::getenv("HDFE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(Eigen::Index begin, Eigen::Index end,
                  const std::function<void(Eigen::Index, Eigen::Index)>& fn,
                  Eigen::Index grain) {
  const Eigen::Index total = end - begin;
  if (total <= 0) return;
  if (grain < 1) grain = 1;
  const Eigen::Index nchunks = (total + grain - 1) / grain;
  const int workers = worker_count();
  if (workers <= 1 || nchunks <= 1) {
    for (Eigen::Index c = 0; c < nchunks; ++c) {
      const Eigen::Index lo = begin + c * grain;
      fn(lo, std::min(end, lo + grain));
    }
    return;
  }
  std::atomic<Eigen::Index> next{0};
  auto run = [&] {
    for (;;) {
      const Eigen::Index c = next.fetch_add(1);
      if (c >= nchunks) break;
      const Eigen::Index lo = begin + c * grain;
      fn(lo, std::min(end, lo + grain));
    }
  };
  const int nthreads =
      static_cast<int>(std::min<Eigen::Index>(workers, nchunks));
  std::vector<std::thread> pool;
  pool.reserve(nthreads - 1);
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

}  // namespace hdfe
