#include <omp.h>

#include <cstdint>
#include <vector>

#include "uf/kernels.hpp"

namespace uf::kernels {

namespace {
using Index = std::int64_t;
}

void csr_apply(const CsrMatrix& a, std::span<const double> in, std::span<double> out) {
    const Index rows = static_cast<Index>(a.rows);
#pragma omp parallel for schedule(static)
    for (Index r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.val[k] * in[a.col[k]];
        out[r] = s;
    }
}

void flux_eval(const FluxFunction& f, double t, const Grid& grid, std::span<const double> u, std::span<double> out) {
    const Index n = static_cast<Index>(grid.cell_count());
#pragma omp parallel
    {
        std::vector<double> x(grid.dim());
#pragma omp for schedule(static)
        for (Index c = 0; c < n; ++c) {
            grid.cell_center(static_cast<std::size_t>(c), x);
            out[c] = f(t, x, u[c]);
        }
    }
}

void axpy(double a, std::span<const double> x, std::span<const double> y, std::span<double> out) {
    const Index n = static_cast<Index>(out.size());
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) out[i] = y[i] + a * x[i];
}

void rk4_combine(std::span<const double> u, std::span<const double> k1, std::span<const double> k2,
                 std::span<const double> k3, std::span<const double> k4, double dt, std::span<double> out) {
    const double w = dt / 6.0;
    const Index n = static_cast<Index>(out.size());
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) out[i] = u[i] + w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

void for_each_cell(std::size_t n, const std::function<void(std::size_t)>& body) {
    const Index count = static_cast<Index>(n);
#pragma omp parallel for schedule(dynamic, 4)
    for (Index c = 0; c < count; ++c) body(static_cast<std::size_t>(c));
}

}  // namespace uf::kernels
