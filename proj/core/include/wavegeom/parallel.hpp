#ifndef WAVEGEOM_PARALLEL_HPP
#define WAVEGEOM_PARALLEL_HPP

// Deterministic parallelism helper. Work is split into chunks whose count
// depends only on the problem size, never on the thread count, and chunk
// results are combined in index order. Running with 1 or N threads produces
// bit-identical reductions.

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace wavegeom {

inline int default_thread_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Applies fn(i) for i in [0, n). fn must be safe to call concurrently for
// distinct i. Exceptions are captured and the first one rethrown.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         int threads = 0) {
  if (threads <= 0) threads = default_thread_count();
  if (n == 0) return;
  if (threads == 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int nt = std::min<std::size_t>(threads, n);
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

// Deterministic map-reduce: results[i] = fn(i) stored per index, then summed
// in index order by the caller-provided combine.
template <class T, class Fn, class Combine>
T parallel_reduce(std::size_t n, T init, Fn&& fn, Combine&& combine, int threads = 0) {
  std::vector<T> results(n, init);
  parallel_for(
      n, [&](std::size_t i) { results[i] = fn(i); }, threads);
  T acc = init;
  for (std::size_t i = 0; i < n; ++i) acc = combine(acc, results[i]);
  return acc;
}

}  // namespace wavegeom

#endif
