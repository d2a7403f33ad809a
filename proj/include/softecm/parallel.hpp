#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace softecm {

/// Thread count from SOFTECM_THREADS, else hardware concurrency (at least 1).
int default_thread_count();

/// Runs fn(i) for i in [0, count) over static contiguous blocks. Each index is
/// handled by exactly one thread, so callers that write per-index results and
/// reduce them afterwards in index order get thread-count-independent output.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t used = std::min(workers, count);
  const std::size_t block = (count + used - 1) / used;
  std::vector<std::exception_ptr> errors(used);
  std::vector<std::thread> pool;
  pool.reserve(used);
  for (std::size_t t = 0; t < used; ++t) {
    pool.emplace_back([&, t] {
      try {
        const std::size_t lo = t * block;
        const std::size_t hi = std::min(count, lo + block);
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace softecm
