#include "uf/ultraspace.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "uf/error.hpp"
#include "uf/kernels.hpp"
#include "uf/summation.hpp"

namespace uf {

Ultrafunction::Ultrafunction(Grid grid) : grid_(std::move(grid)), coeffs_(grid_.cell_count(), 0.0) {}

Ultrafunction::Ultrafunction(Grid grid, std::vector<double> coeffs) : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.cell_count())
        throw InvalidArgument("expected " + std::to_string(grid_.cell_count()) + " coefficients, got " +
                              std::to_string(coeffs_.size()));
    for (double v : coeffs_)
        if (!std::isfinite(v)) throw InvalidArgument("ultrafunction coefficients must be finite");
}

Ultrafunction Ultrafunction::constant(Grid grid, double value) {
    const std::size_t n = grid.cell_count();
    return Ultrafunction(std::move(grid), std::vector<double>(n, value));
}

Ultrafunction Ultrafunction::indicator(const Region& omega) {
    Ultrafunction u(omega.grid());
    for (std::size_t c = 0; c < u.size(); ++c) u[c] = omega.contains(c) ? 1.0 : 0.0;
    return u;
}

std::vector<std::size_t> Ultrafunction::support() const {
    std::vector<std::size_t> s;
    for (std::size_t c = 0; c < coeffs_.size(); ++c)
        if (coeffs_[c] != 0.0) s.push_back(c);
    return s;
}

Projection project_function(const PointFunction& f, const Grid& grid, const CubatureOptions& opts) {
    std::vector<double> coeffs(grid.cell_count(), 0.0);
    std::vector<CellDiagnostic> diag(grid.cell_count());
    std::vector<std::uint8_t> bad(grid.cell_count(), 0);
    kernels::for_each_cell(grid.cell_count(), [&](std::size_t c) {
        std::vector<double> lo(grid.dim()), hi(grid.dim());
        for (int a = 0; a < grid.dim(); ++a) {
            lo[a] = grid.lower(a) + static_cast<double>(grid.coord(c, a)) * grid.h();
            hi[a] = lo[a] + grid.h();
        }
        const CubatureResult r = box_average(f, lo, hi, opts);
        coeffs[c] = r.finite ? r.average : 0.0;
        if (!r.converged || !r.finite) {
            bad[c] = 1;
            diag[c] = {c, r.error, r.finite};
        }
    });
    std::vector<CellDiagnostic> unconverged;
    for (std::size_t c = 0; c < bad.size(); ++c)
        if (bad[c]) unconverged.push_back(diag[c]);
    return {Ultrafunction(grid, std::move(coeffs)), std::move(unconverged)};
}

std::vector<std::pair<std::size_t, double>> point_stencil(const Grid& grid, std::span<const double> x) {
    const int n = grid.dim();
    if (x.size() != static_cast<std::size_t>(n)) throw InvalidArgument("point dimension does not match grid");
    // per axis: one coordinate with weight 1, or two with weight 1/2 on a face
    std::vector<std::vector<std::pair<std::int64_t, double>>> axis_choices(n);
    for (int a = 0; a < n; ++a) {
        const double s = (x[a] - grid.lower(a)) / grid.h();
        const double e = static_cast<double>(grid.extent(a));
        const double k = std::round(s);
        const double tol = 1e-12 * std::max(1.0, std::abs(s));
        if (std::abs(s - k) <= tol) {
            if (k < 0.0 || k > e) return {};
            const auto kk = static_cast<std::int64_t>(k);
            axis_choices[a] = {{kk - 1, 0.5}, {kk, 0.5}};
        } else {
            if (s < 0.0 || s > e) return {};
            axis_choices[a] = {{static_cast<std::int64_t>(std::floor(s)), 1.0}};
        }
    }
    std::vector<std::pair<std::size_t, double>> out;
    std::vector<std::size_t> pick(n, 0);
    while (true) {
        double w = 1.0;
        bool inside = true;
        std::size_t id = 0;
        for (int a = 0; a < n; ++a) {
            const auto [k, wa] = axis_choices[a][pick[a]];
            w *= wa;
            if (k < 0 || k >= static_cast<std::int64_t>(grid.extent(a)))
                inside = false;
            else
                id += static_cast<std::size_t>(k) * grid.stride(a);
        }
        if (inside) out.emplace_back(id, w);
        int a = n - 1;
        while (a >= 0 && ++pick[a] == axis_choices[a].size()) pick[a--] = 0;
        if (a < 0) break;
    }
    return out;
}

double eval_at_point(const Ultrafunction& u, std::span<const double> x) {
    double v = 0.0;
    for (const auto& [c, w] : point_stencil(u.grid(), x)) v += w * u[c];
    return v;
}

Projection project_measure(const RadonMeasureSpec& mu, const Grid& grid, const CubatureOptions& opts) {
    Projection out{Ultrafunction(grid), {}};
    if (mu.density) out = project_function(*mu.density, grid, opts);
    auto& u = out.function;
    const double inv_vol = 1.0 / grid.cell_volume();
    for (const auto& [fid, w] : mu.surface) {
        if (fid.axis < 0 || fid.axis >= grid.dim() || fid.index >= grid.face_count(fid.axis))
            throw InvalidArgument("surface weight on a face that is not a grid face");
        if (!std::isfinite(w)) throw InvalidArgument("surface weight must be finite");
        const Face face = grid.face(fid);
        // trace of v on the face is (v- + v+)/2
        if (face.minus_cell != kExterior) u[face.minus_cell] += 0.5 * w * inv_vol;
        if (face.plus_cell != kExterior) u[face.plus_cell] += 0.5 * w * inv_vol;
    }
    for (const auto& atom : mu.atoms) {
        if (atom.point.size() != static_cast<std::size_t>(grid.dim()))
            throw InvalidArgument("atom dimension does not match grid");
        if (!std::isfinite(atom.mass)) throw InvalidArgument("atom mass must be finite");
        const auto stencil = point_stencil(grid, atom.point);
        if (stencil.empty()) throw InvalidArgument("atom lies outside the grid box");
        for (const auto& [c, w] : stencil) u[c] += atom.mass * w * inv_vol;
    }
    return out;
}

double inner_product(const Ultrafunction& u, const Ultrafunction& v) {
    require_same_grid(u.grid(), v.grid());
    std::vector<double> prod(u.size());
    for (std::size_t c = 0; c < prod.size(); ++c) prod[c] = u[c] * v[c];
    return u.grid().cell_volume() * pairwise_sum(prod);
}

double norm(const Ultrafunction& u) { return std::sqrt(inner_product(u, u)); }

Ultrafunction pointwise_multiply(const Ultrafunction& u, const Ultrafunction& v) {
    require_same_grid(u.grid(), v.grid());
    Ultrafunction w(u.grid());
    for (std::size_t c = 0; c < w.size(); ++c) w[c] = u[c] * v[c];
    return w;
}

Grid refine_grid(const Grid& coarse) {
    std::vector<std::size_t> ext = coarse.extents();
    for (auto& e : ext) e *= 2;
    return Grid(ext, coarse.origin(), coarse.h() / 2.0);
}

Ultrafunction prolong(const Ultrafunction& coarse, const Grid& fine) {
    require_same_grid(refine_grid(coarse.grid()), fine);
    const Grid& g = coarse.grid();
    Ultrafunction u(fine);
    for (std::size_t c = 0; c < fine.cell_count(); ++c) {
        std::size_t parent = 0;
        for (int a = 0; a < fine.dim(); ++a) parent += static_cast<std::size_t>(fine.coord(c, a) / 2) * g.stride(a);
        u[c] = coarse[parent];
    }
    return u;
}

Ultrafunction restrict_to(const Ultrafunction& fine, const Grid& coarse) {
    require_same_grid(refine_grid(coarse), fine.grid());
    const Grid& g = fine.grid();
    const int n = g.dim();
    const std::size_t nchild = std::size_t{1} << n;
    Ultrafunction u(coarse);
    for (std::size_t c = 0; c < coarse.cell_count(); ++c) {
        double s = 0.0;
        for (std::size_t m = 0; m < nchild; ++m) {
            std::size_t id = 0;
            for (int a = 0; a < n; ++a)
                id += static_cast<std::size_t>(2 * coarse.coord(c, a) + ((m >> (n - 1 - a)) & 1u)) * g.stride(a);
            s += fine[id];
        }
        u[c] = s / static_cast<double>(nchild);
    }
    return u;
}

}  // namespace uf
