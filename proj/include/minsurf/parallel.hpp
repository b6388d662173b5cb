#pragma once

#include <cstddef>
#include <functional>

namespace minsurf {

/// Worker count: MINSURF_THREADS when set to a positive integer, otherwise
/// the hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [begin, end) over contiguous static chunks. Each index
/// must write only its own output slot; results are then independent of the
/// worker count.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace minsurf
