#include "dissiplab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace dissiplab {

unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DISSIPLAB_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // malformed value: ignore the cap
    }
  }
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::exception_ptr error;
  std::mutex error_mutex;
  auto run_block = [&](std::size_t begin, std::size_t end) {
    try {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * block;
    if (begin >= n) break;
    threads.emplace_back(run_block, begin, std::min(n, begin + block));
  }
  run_block(0, std::min(n, block));
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace dissiplab
