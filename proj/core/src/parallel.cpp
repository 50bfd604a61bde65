#include "mgap/parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

#include "mgap/errors.hpp"

namespace mgap {

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
  if (workers == 0) throw config_error("workers must be >= 1");
  if (count == 0) return;
  const std::size_t n_threads = std::min<std::size_t>(workers, count);
  if (n_threads == 1) {
    chunk_fn(0, count);
    return;
  }
  const std::size_t base = count / n_threads;
  const std::size_t extra = count % n_threads;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(n_threads);
  pool.reserve(n_threads);
  std::size_t begin = 0;
  for (std::size_t t = 0; t < n_threads; ++t) {
    const std::size_t len = base + (t < extra ? 1 : 0);
    const std::size_t end = begin + len;
    pool.emplace_back([&, t, begin, end] {
      try {
        chunk_fn(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace mgap
