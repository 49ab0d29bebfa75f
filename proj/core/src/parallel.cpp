#include "axibouss/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef AXIBOUSS_HAVE_OPENMP
#include <omp.h>
#endif

namespace axibouss {

namespace {

int env_threads() {
    if (const char* s = std::getenv("AXIBOUSS_THREADS")) {
        try {
            const int n = std::stoi(s);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
#ifdef AXIBOUSS_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

int& cap_storage() {
    static int cap = env_threads();
    return cap;
}

} // namespace

void set_thread_cap(int threads) {
    cap_storage() = threads > 0 ? threads : env_threads();
#ifdef AXIBOUSS_HAVE_OPENMP
    omp_set_num_threads(cap_storage());
#endif
}

int thread_cap() { return cap_storage(); }

} // namespace axibouss
