#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pcf::par {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

/// Data-parallel loop over [0, n). The body must be thread-safe; all
/// library values are immutable, so sharing inputs across iterations is
/// fine.
template <typename Fn>
void parallel_for(std::size_t n, const Fn& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        body(static_cast<std::size_t>(i));
#else
    for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

/// Counts failing indices in parallel; used by the batch property checks.
template <typename Pred>
std::size_t count_failures(std::size_t n, const Pred& ok) {
    std::size_t failures = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : failures)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        if (!ok(static_cast<std::size_t>(i))) ++failures;
    }
#else
    for (std::size_t i = 0; i < n; ++i)
        if (!ok(i)) ++failures;
#endif
    return failures;
}

}  // namespace pcf::par
