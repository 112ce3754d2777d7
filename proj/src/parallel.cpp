#include "wlab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace wlab {

namespace {

int threads_from_env() {
  if (const char* env = std::getenv("WLAB_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (...) {
    }
  }
  return 1;
}

std::atomic<int>& thread_setting() {
  static std::atomic<int> setting{threads_from_env()};
  return setting;
}

}  // namespace

int thread_count() { return thread_setting().load(); }

void set_thread_count(int n) { thread_setting().store(std::max(1, n)); }

}  // namespace wlab
