#pragma once

#include <cstddef>
#include <functional>

namespace snu {

/// Worker cap: SNU_THREADS if set (clamped to >= 1), otherwise
/// hardware_concurrency.
unsigned thread_cap();

/// Runs fn(i) for i in [0, n). Work items must be independent; results should
/// be written to preassigned slots so the outcome does not depend on the
/// number of workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace snu
