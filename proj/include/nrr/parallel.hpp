#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace nrr {

// Static contiguous partition of [0, n_items) over n_workers threads.
// fn(worker, begin, end) owns its slice exclusively, so results are
// independent of the worker count as long as fn writes only to its slice
// (or to per-worker buffers indexed by `worker`).
inline void parallel_for_chunks(int n_items, int n_workers,
                                const std::function<void(int, int, int)>& fn) {
  if (n_workers > n_items) n_workers = n_items;
  if (n_workers < 1) n_workers = 1;
  if (n_workers == 1) {
    fn(0, 0, n_items);
    return;
  }
  const int base = n_items / n_workers;
  const int rem = n_items % n_workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(n_workers) - 1);
  int begin = 0;
  for (int w = 0; w < n_workers; ++w) {
    const int count = base + (w < rem ? 1 : 0);
    const int end = begin + count;
    if (w == n_workers - 1) {
      fn(w, begin, end);
    } else {
      pool.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
    }
    begin = end;
  }
  for (auto& t : pool) t.join();
}

}  // namespace nrr
