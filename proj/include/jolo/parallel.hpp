#pragma once

#include <functional>

namespace jolo {

// Runs fn(i) for i in [0, count) across hardware threads, blocking until all
// complete. Callers give each index its own output slot and its own derived
// random stream, so results never depend on scheduling. Falls back to a plain
// loop on single-core hosts. Exceptions from workers are rethrown.
void parallel_for(int count, const std::function<void(int)>& fn);

} // namespace jolo
