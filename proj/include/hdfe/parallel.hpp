#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace hdfe {

// Worker cap: HDFE_THREADS environment variable; 0 or unset means the
// hardware concurrency.
int worker_count();

// Runs fn(chunk_begin, chunk_end) over [begin, end) split into chunks of
// at most `grain` elements. Chunk boundaries depend only on the range and
// the grain, never on the worker count, so per-chunk results (and any
// per-chunk partials a caller keeps) are identical for any thread count.
void parallel_for(Eigen::Index begin, Eigen::Index end,
                  const std::function<void(Eigen::Index, Eigen::Index)>& fn,
                  Eigen::Index grain = 256);

}  // namespace hdfe
