#pragma once

#include <cstddef>
#include <functional>

namespace plrkit {

/// Worker count used by sweeps; 0 means hardware concurrency.
void set_worker_count(unsigned n);
unsigned worker_count();

/// Calls body(i) for i in [0, n) split into contiguous blocks across workers.
/// body must only write to slots owned by i, so results do not depend on the split.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace plrkit
