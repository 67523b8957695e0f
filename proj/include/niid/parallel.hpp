#pragma once

#include <cstddef>
#include <functional>

namespace niid {

/// Resolves a requested worker count: 0 means hardware concurrency.
[[nodiscard]] unsigned resolve_threads(unsigned requested) noexcept;

/// Calls body(i) for every i in [0, count) using up to `threads` workers.
/// Work is handed out in index order; body must only write state owned by i.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace niid
