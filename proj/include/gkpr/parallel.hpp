#pragma once

// Ordered parallel map used by the sweep drivers. Results land at their
// index, so the worker count never changes the output.

#include <cstdint>
#include <exception>
#include <vector>

#include "gkpr/mc_oracle.hpp"

namespace gkpr {

template <class T, class Fn>
std::vector<T> map_ordered(std::size_t count, Execution exec, Fn fn) {
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  const auto body = [&](std::size_t i) {
    try {
      out[i] = fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (exec == Execution::Parallel) {
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < count; ++i) body(i);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace gkpr
