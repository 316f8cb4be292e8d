#include "uf/kernels.hpp"

#include <vector>

namespace uf::kernels::serial {

void csr_apply(const CsrMatrix& a, std::span<const double> in, std::span<double> out) {
    for (std::size_t r = 0; r < a.rows; ++r) {
        double s = 0.0;
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.val[k] * in[a.col[k]];
        out[r] = s;
    }
}

void flux_eval(const FluxFunction& f, double t, const Grid& grid, std::span<const double> u, std::span<double> out) {
    std::vector<double> x(grid.dim());
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        grid.cell_center(c, x);
        out[c] = f(t, x, u[c]);
    }
}

void axpy(double a, std::span<const double> x, std::span<const double> y, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = y[i] + a * x[i];
}

void rk4_combine(std::span<const double> u, std::span<const double> k1, std::span<const double> k2,
                 std::span<const double> k3, std::span<const double> k4, double dt, std::span<double> out) {
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i] + w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

void for_each_cell(std::size_t n, const std::function<void(std::size_t)>& body) {
    for (std::size_t c = 0; c < n; ++c) body(c);
}

}  // namespace uf::kernels::serial
