#include "momentmix/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace momentmix {

int configure_threads_from_env() {
  if (const char* cap = std::getenv("MOMENTMIX_THREADS")) {
    try {
      const int requested = std::stoi(cap);
      if (requested >= 1) omp_set_num_threads(std::min(requested, omp_get_num_procs()));
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return omp_get_max_threads();
}

int max_threads() noexcept { return omp_get_max_threads(); }

}  // namespace momentmix
