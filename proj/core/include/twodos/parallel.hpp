#pragma once

#include <functional>

namespace twodos {

// Number of workers to use: requested, or the hardware count when 0.
int effective_threads(int requested);

// Runs fn(chunk_index) for chunk_index in [0, chunks) on a small worker
// pool. Chunk decomposition is fixed by the caller, so results merged in
// chunk order do not depend on the worker count.
void parallel_for_chunks(int chunks, int threads,
                         const std::function<void(int)>& fn);

}  // namespace twodos
