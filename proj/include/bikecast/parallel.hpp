#ifndef BIKECAST_PARALLEL_HPP
#define BIKECAST_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace bikecast {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work items must be
// independent and write only to their own output slots, so the result is
// identical for any job count. jobs <= 1 runs inline.
void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn);

} // namespace bikecast

#endif
