#include "minflow/execution.hpp"

#include <omp.h>

#include <exception>
#include <vector>

namespace minflow {

void run_indexed(std::size_t count, Execution exec, const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(count);
  const long n = static_cast<long>(count);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
      try {
        task(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (long i = 0; i < n; ++i) {
      try {
        task(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

int worker_count() { return omp_get_max_threads(); }

}  // namespace minflow
