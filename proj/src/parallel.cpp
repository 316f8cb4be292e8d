#include "uf/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace uf::parallel {

namespace {
int default_threads() {
    static const int n = omp_get_max_threads();
    return n;
}
}  // namespace

void set_threads(int n) {
    default_threads();
    omp_set_num_threads(n > 0 ? n : default_threads());
}

int threads() { return omp_get_max_threads(); }

void configure_from_env() {
    const char* v = std::getenv("UF_THREADS");
    if (v == nullptr || *v == '\0') return;
    try {
        set_threads(std::stoi(v));
    } catch (const std::exception&) {
        // ignore malformed values
    }
}

}  // namespace uf::parallel
