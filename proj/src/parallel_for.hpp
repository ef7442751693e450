#ifndef HPRLP_PARALLEL_FOR_HPP
#define HPRLP_PARALLEL_FOR_HPP

#include <cstdint>

namespace hprlp::detail {

// Runs body(i) for i in [0, n). Small ranges never enter the OpenMP runtime,
// which allocates a team even when the parallel region is disabled.
template <class Body>
void parallel_for(std::int64_t n, bool parallel, Body&& body) {
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) body(i);
  }
}

}  // namespace hprlp::detail

#endif  // HPRLP_PARALLEL_FOR_HPP
