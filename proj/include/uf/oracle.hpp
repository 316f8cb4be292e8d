#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "uf/calculus.hpp"
#include "uf/grid.hpp"
#include "uf/ultraspace.hpp"

// Slow dense reference implementations. Nothing here calls the fast
// projection or derivative code: basis functions are evaluated by point
// lookup, pairings are formed for every basis pair and the resulting
// systems are solved by Gaussian elimination.
namespace uf::oracle {

inline constexpr std::size_t kMaxCells = 4096;

struct DenseOperator {
    std::size_t n = 0;
    std::vector<double> a;  // row-major n x n

    double at(std::size_t r, std::size_t c) const { return a[r * n + c]; }
    double& at(std::size_t r, std::size_t c) { return a[r * n + c]; }
    std::vector<double> apply(std::span<const double> x) const;
};

// Solves A X = B in place for every column of B (n x m, row-major) with
// partial pivoting. Throws on a singular matrix.
void gauss_solve(DenseOperator a, std::vector<double>& b, std::size_t m);

// Regularized value of the cell characteristic chi_c at x: the mean over the
// 2^N points x + eps s, s in {-1,1}^N, of the cell containing each.
double regularized_basis_value(const Grid& grid, std::size_t c, std::span<const double> x);

// M_ab = integral of chi_a chi_b, from overlapping cell boxes.
DenseOperator dense_mass(const Grid& grid);

Ultrafunction dense_project_measure(const RadonMeasureSpec& mu, const Grid& grid);

// Every entry of M^{-1} P, P_ba = <chi_b, d_j chi_a>.
DenseOperator dense_derivative(const Grid& grid, int axis);

struct CompareReport {
    double max_abs = 0.0;
    double max_rel = 0.0;
    std::size_t worst_index = 0;
    double tolerance = 0.0;
    bool pass = true;
};

// max |fast - dense| <= tol * max(1, max |dense|)
CompareReport compare(std::span<const double> fast, std::span<const double> dense, double tol);
CompareReport compare(const Ultrafunction& fast, const Ultrafunction& dense, double tol);
CompareReport compare(const DerivOperator& fast, const DenseOperator& dense, double tol);

}  // namespace uf::oracle
