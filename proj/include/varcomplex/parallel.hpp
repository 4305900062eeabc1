#pragma once

// Index-parallel map used by the column-assembly kernels. The Serial path is
// the reference implementation; both produce identical output vectors.

#include <cstddef>
#include <exception>
#include <vector>

namespace varcomplex {

enum class Execution { Serial, Parallel };

template <typename T, typename F>
std::vector<T> map_indices(std::size_t count, F&& f, Execution mode = Execution::Parallel) {
  std::vector<T> out(count);
  if (mode == Execution::Serial) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::exception_ptr failure;
  const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(varcomplex_map_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace varcomplex
