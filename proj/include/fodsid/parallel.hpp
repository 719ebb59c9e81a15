#ifndef FODSID_PARALLEL_HPP
#define FODSID_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace fodsid {

/// Worker count used when a caller asks for 0 threads.
int default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Items are
/// claimed dynamically, so callers must write results by index. The first
/// exception thrown by any item is rethrown after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace fodsid

#endif  // FODSID_PARALLEL_HPP
