#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <thread>
#include <vector>

namespace wlab {

/// Worker cap for inner loops. Defaults to $WLAB_THREADS, else 1.
int thread_count();
void set_thread_count(int n);

/// Static-chunk parallel loop over [begin, end). Every index is visited by
/// exactly one worker, so loops that only write slot i are bit-identical for
/// any thread count. Reductions belong outside, in a fixed order.
template <typename Fn>
void parallel_for(Eigen::Index begin, Eigen::Index end, Fn&& fn,
                  Eigen::Index grain = 2048) {
  const Eigen::Index count = end - begin;
  const int workers = static_cast<int>(
      std::min<Eigen::Index>(thread_count(), std::max<Eigen::Index>(1, count / grain)));
  if (workers <= 1) {
    for (Eigen::Index i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const Eigen::Index chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const Eigen::Index lo = begin + w * chunk;
    const Eigen::Index hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (Eigen::Index i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace wlab
