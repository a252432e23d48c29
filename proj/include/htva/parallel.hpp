#pragma once

#include <cstddef>
#include <functional>

namespace htva {

// Worker count: HTVA_THREADS if set and positive, else hardware concurrency.
int thread_count();
// Runs body(i) for i in [0, n); exceptions are rethrown on the calling thread.
void parallel_for(size_t n, const std::function<void(size_t)>& body);

}  // namespace htva
