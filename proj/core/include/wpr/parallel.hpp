#pragma once

#include <cstddef>
#include <functional>

namespace wpr {

// Worker count used by the particle loops. WPR_WORKERS overrides the
// hardware default; values < 1 are treated as 1.
std::size_t worker_count();

// Runs fn(i) for i in [0, n). Tasks must write to disjoint locations;
// under that contract the result does not depend on the schedule, so
// output is identical for any worker count. workers == 1 runs inline.
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace wpr
