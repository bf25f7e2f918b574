#pragma once

#include <functional>

namespace qmono {

// Thread count resolution: QMONO_THREADS env var wins, then `requested`,
// floor 1. `requested` <= 0 means hardware concurrency.
int resolve_threads(int requested);

// Static partition of [0, n) over `threads` workers. Callers make work
// deterministic by deriving any randomness from the index and reducing results
// in index order.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

}  // namespace qmono
