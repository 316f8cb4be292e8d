#pragma once

namespace uf::parallel {

// Caps the number of OpenMP threads used by the kernels. n <= 0 restores the
// runtime default.
void set_threads(int n);
int threads();

// Reads UF_THREADS from the environment and applies it, if set.
void configure_from_env();

}  // namespace uf::parallel
