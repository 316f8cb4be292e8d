#pragma once

#include <memory>
#include <vector>

#include "uf/grid.hpp"
#include "uf/kernels.hpp"
#include "uf/ultraspace.hpp"

namespace uf {

/// D_j: projection of the distributional derivative along one axis.
///
/// The derivative of a stage function is the face-jump measure, weight
/// (u+ - u-) h^(N-1) on each axis face (exterior value 0), and it is paired
/// with the regularized trace (v- + v+)/2. The resulting rows are the
/// centered difference (u[c+e] - u[c-e]) / 2h, and M D is skew-symmetric for
/// the diagonal mass matrix M = h^N I.
class DerivOperator {
public:
    DerivOperator(Grid grid, int axis, kernels::CsrMatrix csr);

    const Grid& grid() const { return grid_; }
    int axis() const { return axis_; }
    const kernels::CsrMatrix& matrix() const { return csr_; }
    // Coefficient at (row, col); 0 when not stored.
    double entry(std::size_t row, std::size_t col) const;

    Ultrafunction apply(const Ultrafunction& u) const;
    Ultrafunction apply_serial(const Ultrafunction& u) const;

private:
    Grid grid_;
    int axis_;
    kernels::CsrMatrix csr_;
};

DerivOperator assemble_derivative(const Grid& grid, int axis);

// The N derivative operators of one grid, assembled once.
class OperatorSet {
public:
    explicit OperatorSet(const Grid& grid);
    const Grid& grid() const { return grid_; }
    const DerivOperator& d(int axis) const { return ops_[axis]; }

private:
    Grid grid_;
    std::vector<DerivOperator> ops_;
};

// Cached operator set for a grid (thread-safe).
std::shared_ptr<const OperatorSet> operators_for(const Grid& grid);

/// N stage functions on one grid.
class VectorUltrafunction {
public:
    explicit VectorUltrafunction(std::vector<Ultrafunction> components);
    static VectorUltrafunction zero(const Grid& grid);

    const Grid& grid() const { return comps_.front().grid(); }
    int dim() const { return static_cast<int>(comps_.size()); }
    const Ultrafunction& operator[](int j) const { return comps_[j]; }
    Ultrafunction& operator[](int j) { return comps_[j]; }
    const std::vector<Ultrafunction>& components() const { return comps_; }

private:
    std::vector<Ultrafunction> comps_;
};

VectorUltrafunction gradient(const Ultrafunction& u);
Ultrafunction divergence(const VectorUltrafunction& phi);

// integral of u * regularized chi_omega = h^N sum_{c in omega} u_c
double region_integral(const Ultrafunction& u, const Region& omega);

// Projection of the total variation measure |grad chi_omega| (weight
// h^(N-1) on each boundary face).
Ultrafunction surface_density(const Region& omega);

// -grad chi / |grad chi| (Euclidean) where the gradient is nonzero, else 0.
VectorUltrafunction normal_field(const Region& omega);

// (u, surface_density(omega))
double surface_integral(const Ultrafunction& u, const Region& omega);

// h^(N-1) sum_j sum_c |phi_j,c|; bounds every summand of both sides of the
// divergence identity.
double flux_scale(const VectorUltrafunction& phi);

// h^N sum_c (phi_c . nu_c) |grad chi_c|.
double pointwise_surface_pairing(const VectorUltrafunction& phi, const Region& omega);

struct GaussReport {
    double lhs = 0.0;             // integral over omega of div phi
    double mid = 0.0;             // -integral phi . grad chi
    double rhs_tv = 0.0;          // surface integral with the projected TV density
    double rhs_pointwise = 0.0;   // surface integral with |grad chi| taken cellwise
    double scale = 0.0;
    double lemma_residual = 0.0;        // |lhs - mid|
    double pointwise_residual = 0.0;    // |lhs - rhs_pointwise|
    double tv_residual = 0.0;           // |lhs - rhs_tv|, nonzero at corner cells
    double tolerance = 0.0;             // rel_tol * scale
    bool lemma_ok = false;
    bool theorem_ok = false;
};

GaussReport gauss_check(const VectorUltrafunction& phi, const Region& omega, double rel_tol = 1e-12);

// True when some cell within `margin` cells of the box boundary is nonzero.
bool support_touches_box(const Ultrafunction& u, int margin = 1);

}  // namespace uf
