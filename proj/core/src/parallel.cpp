#include "csplab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "csplab/errors.hpp"

namespace csplab {

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  if (threads < 1) threads = 1;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::atomic<bool> failed{false};

  auto work = [&]() {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back(work);
  }
  for (std::thread& t : pool) {
    t.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

unsigned resolve_thread_count(unsigned configured) {
  if (const char* env = std::getenv("CSP_LAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v < 1) {
        throw ParamError("CSP_LAB_THREADS: must be >= 1, got " + std::string(env));
      }
      return static_cast<unsigned>(v);
    } catch (const std::invalid_argument&) {
      throw ParamError("CSP_LAB_THREADS: not a number: " + std::string(env));
    } catch (const std::out_of_range&) {
      throw ParamError("CSP_LAB_THREADS: out of range: " + std::string(env));
    }
  }
  if (configured >= 1) {
    return configured;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? hw : 1;
}

}  // namespace csplab
