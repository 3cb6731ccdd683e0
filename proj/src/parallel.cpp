#include "hypersurf/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hypersurf {

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

}  // namespace hypersurf
