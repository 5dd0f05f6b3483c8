#pragma once

#include <functional>

namespace hfreq {

/// Global cap on worker threads (0 = hardware concurrency). Used by the grid
/// sweeps; per-cell results land in preassigned slots and reductions run
/// serially in index order, so results do not depend on the thread count.
void set_max_threads(int n);
int max_threads();

void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace hfreq
