#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gpstack {

// Execution policy for the data-parallel kernels. Every kernel has a
// plain serial loop and an OpenMP variant; both write disjoint outputs
// per iteration, so the two policies produce bit-identical results.
// The serial path is kept as the reference for tests and benchmarks.
enum class Exec {
    Serial,
    Parallel,
};

inline void set_max_threads(int jobs) {
#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#else
    (void)jobs;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace gpstack
