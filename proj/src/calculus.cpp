#include "uf/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "uf/error.hpp"
#include "uf/summation.hpp"

namespace uf {

DerivOperator::DerivOperator(Grid grid, int axis, kernels::CsrMatrix csr)
    : grid_(std::move(grid)), axis_(axis), csr_(std::move(csr)) {}

double DerivOperator::entry(std::size_t row, std::size_t col) const {
    const auto first = csr_.col.begin() + static_cast<std::ptrdiff_t>(csr_.row_ptr[row]);
    const auto last = csr_.col.begin() + static_cast<std::ptrdiff_t>(csr_.row_ptr[row + 1]);
    const auto it = std::lower_bound(first, last, col);
    if (it == last || *it != col) return 0.0;
    return csr_.val[static_cast<std::size_t>(it - csr_.col.begin())];
}

Ultrafunction DerivOperator::apply(const Ultrafunction& u) const {
    require_same_grid(grid_, u.grid());
    Ultrafunction out(grid_);
    kernels::csr_apply(csr_, u.coeffs(), out.coeffs());
    return out;
}

Ultrafunction DerivOperator::apply_serial(const Ultrafunction& u) const {
    require_same_grid(grid_, u.grid());
    Ultrafunction out(grid_);
    kernels::serial::csr_apply(csr_, u.coeffs(), out.coeffs());
    return out;
}

DerivOperator assemble_derivative(const Grid& grid, int axis) {
    if (axis < 0 || axis >= grid.dim()) throw InvalidArgument("derivative axis out of range");
    // Pair each face jump with the trace of the test function and divide by
    // the cell volume: both cells beside a face get (u+ - u-) h^(N-1) / (2 h^N).
    const double w = 0.5 * grid.face_area() / grid.cell_volume();
    std::vector<std::map<std::size_t, double>> rows(grid.cell_count());
    for (std::size_t f = 0; f < grid.face_count(axis); ++f) {
        const Face face = grid.face({axis, f});
        for (std::size_t row : {face.minus_cell, face.plus_cell}) {
            if (row == kExterior) continue;
            if (face.plus_cell != kExterior) rows[row][face.plus_cell] += w;
            if (face.minus_cell != kExterior) rows[row][face.minus_cell] -= w;
        }
    }
    kernels::CsrMatrix csr;
    csr.rows = csr.cols = grid.cell_count();
    csr.row_ptr.push_back(0);
    for (const auto& r : rows) {
        for (const auto& [col, v] : r) {
            if (v == 0.0) continue;
            csr.col.push_back(col);
            csr.val.push_back(v);
        }
        csr.row_ptr.push_back(csr.col.size());
    }
    return DerivOperator(grid, axis, std::move(csr));
}

OperatorSet::OperatorSet(const Grid& grid) : grid_(grid) {
    for (int a = 0; a < grid.dim(); ++a) ops_.push_back(assemble_derivative(grid, a));
}

std::shared_ptr<const OperatorSet> operators_for(const Grid& grid) {
    static std::mutex mu;
    static std::vector<std::shared_ptr<const OperatorSet>> cache;
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& ops : cache)
        if (ops->grid() == grid) return ops;
    if (cache.size() >= 16) cache.erase(cache.begin());
    cache.push_back(std::make_shared<const OperatorSet>(grid));
    return cache.back();
}

VectorUltrafunction::VectorUltrafunction(std::vector<Ultrafunction> components) : comps_(std::move(components)) {
    if (comps_.empty()) throw InvalidArgument("vector ultrafunction needs at least one component");
    if (comps_.size() != static_cast<std::size_t>(comps_.front().grid().dim()))
        throw InvalidArgument("vector ultrafunction needs one component per axis");
    for (const auto& c : comps_) require_same_grid(comps_.front().grid(), c.grid());
}

VectorUltrafunction VectorUltrafunction::zero(const Grid& grid) {
    return VectorUltrafunction(std::vector<Ultrafunction>(grid.dim(), Ultrafunction(grid)));
}

VectorUltrafunction gradient(const Ultrafunction& u) {
    const auto ops = operators_for(u.grid());
    std::vector<Ultrafunction> comps;
    for (int j = 0; j < u.grid().dim(); ++j) comps.push_back(ops->d(j).apply(u));
    return VectorUltrafunction(std::move(comps));
}

Ultrafunction divergence(const VectorUltrafunction& phi) {
    const auto ops = operators_for(phi.grid());
    Ultrafunction out(phi.grid());
    for (int j = 0; j < phi.dim(); ++j) {
        const Ultrafunction dj = ops->d(j).apply(phi[j]);
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += dj[c];
    }
    return out;
}

double region_integral(const Ultrafunction& u, const Region& omega) {
    require_same_grid(u.grid(), omega.grid());
    return inner_product(u, Ultrafunction::indicator(omega));
}

Ultrafunction surface_density(const Region& omega) {
    RadonMeasureSpec tv;
    for (const auto& bf : boundary_faces(omega)) tv.surface.emplace_back(bf.id, bf.face.area);
    return project_measure(tv, omega.grid()).function;
}

namespace {

// Euclidean norm of the gradient vector in each cell.
std::vector<double> cell_norms(const VectorUltrafunction& g) {
    std::vector<double> n(g.grid().cell_count(), 0.0);
    for (std::size_t c = 0; c < n.size(); ++c) {
        double s = 0.0;
        for (int j = 0; j < g.dim(); ++j) s += g[j][c] * g[j][c];
        n[c] = std::sqrt(s);
    }
    return n;
}

}  // namespace

VectorUltrafunction normal_field(const Region& omega) {
    const VectorUltrafunction g = gradient(Ultrafunction::indicator(omega));
    const std::vector<double> len = cell_norms(g);
    VectorUltrafunction nu = VectorUltrafunction::zero(omega.grid());
    for (std::size_t c = 0; c < len.size(); ++c) {
        if (len[c] == 0.0) continue;
        for (int j = 0; j < g.dim(); ++j) nu[j][c] = -g[j][c] / len[c];
    }
    return nu;
}

double surface_integral(const Ultrafunction& u, const Region& omega) {
    require_same_grid(u.grid(), omega.grid());
    return inner_product(u, surface_density(omega));
}

double flux_scale(const VectorUltrafunction& phi) {
    std::vector<double> a(phi.grid().cell_count(), 0.0);
    for (std::size_t c = 0; c < a.size(); ++c)
        for (int j = 0; j < phi.dim(); ++j) a[c] += std::abs(phi[j][c]);
    return phi.grid().face_area() * pairwise_sum(a);
}

double pointwise_surface_pairing(const VectorUltrafunction& phi, const Region& omega) {
    require_same_grid(phi.grid(), omega.grid());
    const VectorUltrafunction g = gradient(Ultrafunction::indicator(omega));
    const std::vector<double> len = cell_norms(g);
    std::vector<double> terms(len.size(), 0.0);
    for (std::size_t c = 0; c < len.size(); ++c) {
        if (len[c] == 0.0) continue;
        double dot = 0.0;
        for (int j = 0; j < g.dim(); ++j) dot += phi[j][c] * (-g[j][c] / len[c]);
        terms[c] = dot * len[c];
    }
    return phi.grid().cell_volume() * pairwise_sum(terms);
}

GaussReport gauss_check(const VectorUltrafunction& phi, const Region& omega, double rel_tol) {
    require_same_grid(phi.grid(), omega.grid());
    const Grid& grid = phi.grid();
    GaussReport rep;

    rep.lhs = region_integral(divergence(phi), omega);

    const VectorUltrafunction g = gradient(Ultrafunction::indicator(omega));
    std::vector<double> dots(grid.cell_count(), 0.0);
    for (std::size_t c = 0; c < dots.size(); ++c)
        for (int j = 0; j < phi.dim(); ++j) dots[c] += phi[j][c] * g[j][c];
    rep.mid = -grid.cell_volume() * pairwise_sum(dots);

    rep.rhs_pointwise = pointwise_surface_pairing(phi, omega);

    const VectorUltrafunction nu = normal_field(omega);
    Ultrafunction phi_dot_nu(grid);
    for (std::size_t c = 0; c < grid.cell_count(); ++c)
        for (int j = 0; j < phi.dim(); ++j) phi_dot_nu[c] += phi[j][c] * nu[j][c];
    rep.rhs_tv = surface_integral(phi_dot_nu, omega);

    rep.scale = flux_scale(phi);
    rep.tolerance = rel_tol * rep.scale;
    rep.lemma_residual = std::abs(rep.lhs - rep.mid);
    rep.pointwise_residual = std::abs(rep.lhs - rep.rhs_pointwise);
    rep.tv_residual = std::abs(rep.lhs - rep.rhs_tv);
    rep.lemma_ok = rep.lemma_residual <= rep.tolerance;
    rep.theorem_ok = rep.pointwise_residual <= rep.tolerance;
    return rep;
}

bool support_touches_box(const Ultrafunction& u, int margin) {
    const Grid& g = u.grid();
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        if (u[c] == 0.0) continue;
        for (int a = 0; a < g.dim(); ++a) {
            const auto k = g.coord(c, a);
            if (k < margin || k >= static_cast<std::int64_t>(g.extent(a)) - margin) return true;
        }
    }
    return false;
}

}  // namespace uf
