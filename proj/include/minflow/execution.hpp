// Serial and OpenMP execution of independent indexed tasks.
#pragma once

#include <cstddef>
#include <functional>

namespace minflow {

enum class Execution { serial, parallel };

/// Runs task(i) for i in [0, count). In parallel mode iterations are spread
/// over OpenMP threads with dynamic scheduling. If tasks throw, the exception
/// of the smallest index is rethrown after all tasks finished.
void run_indexed(std::size_t count, Execution exec, const std::function<void(std::size_t)>& task);

/// Threads available to parallel mode.
int worker_count();

}  // namespace minflow
