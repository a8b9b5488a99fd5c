#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pbv::par {

inline int max_jobs() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// jobs == 0 means "use all hardware threads".
inline int resolve_jobs(int jobs) {
    if (jobs <= 0) return max_jobs();
    return jobs;
}

} // namespace pbv::par
