#include "ctxmatch/parallel.hpp"

#include <cstdlib>
#include <string>

namespace ctxmatch {

int default_thread_count() {
  if (const char* env = std::getenv("CTXMATCH_THREADS")) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return value;
    } catch (const std::exception&) {
      // fall through to the hardware count
    }
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

}  // namespace ctxmatch
