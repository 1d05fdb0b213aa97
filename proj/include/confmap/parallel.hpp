#pragma once

#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace confmap {

/// Splits [0, count) into contiguous chunks and runs fn(begin, end) on each,
/// one chunk per worker thread. Work items must be independent; the caller
/// owns any per-chunk scratch state inside fn. The first exception thrown by
/// a worker is rethrown on the calling thread.
template <class Fn>
void parallel_chunks(int count, Fn&& fn) {
  if (count <= 0) return;
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers =
      std::min<int>(count, hw == 0 ? 1 : static_cast<int>(hw));
  if (workers <= 1) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  const int base = count / workers;
  const int extra = count % workers;
  int begin = 0;
  for (int w = 0; w < workers; ++w) {
    const int len = base + (w < extra ? 1 : 0);
    const int end = begin + len;
    pool.emplace_back([&fn, &errors, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace confmap
