#include "causetlab/mc.hpp"

namespace causetlab {

int effective_jobs(int jobs) {
#ifdef _OPENMP
  if (jobs <= 0) return omp_get_max_threads() > 0 ? omp_get_max_threads() : 1;
  return jobs;
#else
  (void)jobs;
  return 1;
#endif
}

}  // namespace causetlab
