#pragma once

#include <functional>

namespace surftrack {

// Splits [begin, end) into contiguous chunks, one per worker thread, and
// runs fn(chunk_begin, chunk_end) on each. Callers must only write to
// disjoint output slots so results do not depend on scheduling.
void parallel_for(int begin, int end, const std::function<void(int, int)>& fn,
                  int min_grain = 64);

int worker_count();

}  // namespace surftrack
