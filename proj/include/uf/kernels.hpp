#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "uf/grid.hpp"

// Per-cell data-parallel kernels. Every output entry depends only on fixed
// inputs, so the OpenMP versions are bit-identical to the serial references
// in uf::kernels::serial regardless of thread count.
namespace uf::kernels {

// Compressed sparse rows; columns ascending within a row.
struct CsrMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<std::size_t> col;
    std::vector<double> val;
};

using FluxFunction = std::function<double(double t, std::span<const double> x, double u)>;

// out = A in
void csr_apply(const CsrMatrix& a, std::span<const double> in, std::span<double> out);
// out_c = F(t, centre(c), u_c)
void flux_eval(const FluxFunction& f, double t, const Grid& grid, std::span<const double> u, std::span<double> out);
// out = y + a x
void axpy(double a, std::span<const double> x, std::span<const double> y, std::span<double> out);
// out = u + dt/6 (k1 + 2 k2 + 2 k3 + k4)
void rk4_combine(std::span<const double> u, std::span<const double> k1, std::span<const double> k2,
                 std::span<const double> k3, std::span<const double> k4, double dt, std::span<double> out);
// body(c) for every c in [0, n); bodies must touch disjoint state.
void for_each_cell(std::size_t n, const std::function<void(std::size_t)>& body);

namespace serial {
void csr_apply(const CsrMatrix& a, std::span<const double> in, std::span<double> out);
void flux_eval(const FluxFunction& f, double t, const Grid& grid, std::span<const double> u, std::span<double> out);
void axpy(double a, std::span<const double> x, std::span<const double> y, std::span<double> out);
void rk4_combine(std::span<const double> u, std::span<const double> k1, std::span<const double> k2,
                 std::span<const double> k3, std::span<const double> k4, double dt, std::span<double> out);
void for_each_cell(std::size_t n, const std::function<void(std::size_t)>& body);
}  // namespace serial

}  // namespace uf::kernels
