#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace memsfbp {

/// Static-schedule parallel loop over [0, n). Each iteration must write only
/// its own slots; no reductions happen here, so results are bitwise identical
/// to the serial loop for any thread count.
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        fn(i);
    }
#else
    for (std::int64_t i = 0; i < n; ++i) {
        fn(i);
    }
#endif
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace memsfbp
