#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "uf/grid.hpp"
#include "uf/quadrature.hpp"

namespace uf {

/// Element of the finite stage: one value per grid cell, i.e. a combination
/// of cell characteristic functions. Coefficients must be finite.
class Ultrafunction {
public:
    explicit Ultrafunction(Grid grid);
    Ultrafunction(Grid grid, std::vector<double> coeffs);

    static Ultrafunction constant(Grid grid, double value);
    static Ultrafunction indicator(const Region& omega);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return coeffs_.size(); }
    double operator[](std::size_t c) const { return coeffs_[c]; }
    double& operator[](std::size_t c) { return coeffs_[c]; }
    std::span<const double> coeffs() const { return coeffs_; }
    std::span<double> coeffs() { return coeffs_; }

    // Cells with a nonzero coefficient.
    std::vector<std::size_t> support() const;

    friend bool operator==(const Ultrafunction&, const Ultrafunction&) = default;

private:
    Grid grid_;
    std::vector<double> coeffs_;
};

/// A point mass.
struct Atom {
    std::vector<double> point;
    double mass = 0.0;
};

/// Finite signed measure: absolutely continuous part + face-carried part +
/// point masses. Face weights are total mass on the face.
struct RadonMeasureSpec {
    std::optional<PointFunction> density;
    std::vector<std::pair<FaceId, double>> surface;
    std::vector<Atom> atoms;
};

struct CellDiagnostic {
    std::size_t cell = 0;
    double error = 0.0;
    bool finite = true;
};

struct Projection {
    Ultrafunction function;
    // Cells whose quadrature did not converge or saw non-finite samples.
    std::vector<CellDiagnostic> unconverged;
};

/// L2-orthogonal projection onto the stage: each coefficient is the cell
/// mean of f. Cells are independent and computed in parallel.
Projection project_function(const PointFunction& f, const Grid& grid, const CubatureOptions& opts = {});

/// Projection of a measure: the unique u with (u, v) = <v, mu> for every
/// stage function v. The pairing uses the regularized value of v: the cell
/// value inside a cell, the mean of the adjacent cells on faces, edges and
/// corners (exterior counts as 0). Since the mass matrix is diagonal,
/// coeff(c) = <regularized chi_c, mu> / h^N.
Projection project_measure(const RadonMeasureSpec& mu, const Grid& grid, const CubatureOptions& opts = {});

// h^N sum u_c v_c, fixed-order summation.
double inner_product(const Ultrafunction& u, const Ultrafunction& v);
double norm(const Ultrafunction& u);

Ultrafunction pointwise_multiply(const Ultrafunction& u, const Ultrafunction& v);

// Regularized point value: the cell value in a cell interior, the mean over
// the 2^k cells meeting at a point lying on k faces, 0 outside the box.
// Points within a relative 1e-12 of a face count as on it.
double eval_at_point(const Ultrafunction& u, std::span<const double> x);

// Cells adjacent to x with the weight of each in the regularized value.
// Empty outside the box; cells past the box boundary are dropped (value 0).
std::vector<std::pair<std::size_t, double>> point_stencil(const Grid& grid, std::span<const double> x);

// Grid with h/2 on the same box.
Grid refine_grid(const Grid& coarse);
// Coarse function viewed on the refined grid (each child takes its parent's value).
Ultrafunction prolong(const Ultrafunction& coarse, const Grid& fine);
// Mean over the 2^N children: the projection of a fine function onto the coarse stage.
Ultrafunction restrict_to(const Ultrafunction& fine, const Grid& coarse);

}  // namespace uf
