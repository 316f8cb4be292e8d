#include "uf/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "uf/error.hpp"

namespace uf::oracle {

std::vector<double> DenseOperator::apply(std::span<const double> x) const {
    if (x.size() != n) throw InvalidArgument("dense operator size mismatch");
    std::vector<double> y(n, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) y[r] += at(r, c) * x[c];
    return y;
}

void gauss_solve(DenseOperator a, std::vector<double>& b, std::size_t m) {
    const std::size_t n = a.n;
    if (b.size() != n * m) throw InvalidArgument("right-hand side has the wrong size");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(a.at(r, k)) > std::abs(a.at(p, k))) p = r;
        if (a.at(p, k) == 0.0) throw Error("singular matrix in dense solve");
        if (p != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a.at(k, c), a.at(p, c));
            for (std::size_t c = 0; c < m; ++c) std::swap(b[k * m + c], b[p * m + c]);
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            const double f = a.at(r, k) / a.at(k, k);
            if (f == 0.0) continue;
            for (std::size_t c = k; c < n; ++c) a.at(r, c) -= f * a.at(k, c);
            for (std::size_t c = 0; c < m; ++c) b[r * m + c] -= f * b[k * m + c];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t c = 0; c < m; ++c) {
            double s = b[k * m + c];
            for (std::size_t j = k + 1; j < n; ++j) s -= a.at(k, j) * b[j * m + c];
            b[k * m + c] = s / a.at(k, k);
        }
    }
}

namespace {

void require_small(const Grid& g) {
    if (g.cell_count() > kMaxCells) throw InvalidArgument("oracle grids are limited to 4096 cells");
}

// Cell containing x by floor lookup, or kExterior.
std::size_t locate(const Grid& g, std::span<const double> x) {
    std::size_t id = 0;
    for (int a = 0; a < g.dim(); ++a) {
        const double k = std::floor((x[a] - g.origin()[a]) / g.h());
        if (k < 0.0 || k >= static_cast<double>(g.extent(a))) return kExterior;
        id += static_cast<std::size_t>(k) * g.stride(a);
    }
    return id;
}

// Lower corner of cell c.
std::vector<double> corner(const Grid& g, std::size_t c) {
    std::vector<double> lo(g.dim());
    std::size_t rest = c;
    for (int a = 0; a < g.dim(); ++a) {
        const std::size_t k = rest / g.stride(a);
        rest %= g.stride(a);
        lo[a] = g.origin()[a] + static_cast<double>(k) * g.h();
    }
    return lo;
}

// 5-point Gauss-Legendre, closed form.
const std::array<double, 5> kNodes = {-std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0,
                                      -std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0, 0.0,
                                      std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0,
                                      std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0};
const std::array<double, 5> kWeights = {(322.0 - 13.0 * std::sqrt(70.0)) / 900.0,
                                        (322.0 + 13.0 * std::sqrt(70.0)) / 900.0, 128.0 / 225.0,
                                        (322.0 + 13.0 * std::sqrt(70.0)) / 900.0,
                                        (322.0 - 13.0 * std::sqrt(70.0)) / 900.0};

// Integral over the box [lo, lo + h]^N: eight 5-point panels per axis.
double cell_integral(const PointFunction& f, const std::vector<double>& lo, double h) {
    constexpr int kPanels = 8;
    const int n = static_cast<int>(lo.size());
    const int per_axis = 5 * kPanels;
    std::vector<int> pick(n, 0);
    std::vector<double> x(n);
    double sum = 0.0;
    while (true) {
        double w = 1.0;
        for (int a = 0; a < n; ++a) {
            const int panel = pick[a] / 5;
            const int q = pick[a] % 5;
            const double half = 0.5 * h / kPanels;
            const double mid = lo[a] + (2 * panel + 1) * half;
            x[a] = mid + half * kNodes[q];
            w *= half * kWeights[q];
        }
        sum += w * f(x);
        int a = n - 1;
        while (a >= 0 && ++pick[a] == per_axis) pick[a--] = 0;
        if (a < 0) break;
    }
    return sum;
}

std::vector<double> face_centre(const Grid& g, FaceId f) {
    const CellIndex lattice = g.face_lattice(f);
    std::vector<double> x(g.dim());
    for (int a = 0; a < g.dim(); ++a)
        x[a] = g.origin()[a] + (static_cast<double>(lattice[a]) + (a == f.axis ? 0.0 : 0.5)) * g.h();
    return x;
}

}  // namespace

double regularized_basis_value(const Grid& grid, std::size_t c, std::span<const double> x) {
    const int n = grid.dim();
    const double eps = 1e-7 * grid.h();
    const std::size_t count = std::size_t{1} << n;
    std::vector<double> y(n);
    double hits = 0.0;
    for (std::size_t s = 0; s < count; ++s) {
        for (int a = 0; a < n; ++a) y[a] = x[a] + (((s >> a) & 1u) ? eps : -eps);
        if (locate(grid, y) == c) hits += 1.0;
    }
    return hits / static_cast<double>(count);
}

DenseOperator dense_mass(const Grid& grid) {
    require_small(grid);
    const std::size_t n = grid.cell_count();
    DenseOperator m{n, std::vector<double>(n * n, 0.0)};
    for (std::size_t r = 0; r < n; ++r) {
        const auto lr = corner(grid, r);
        for (std::size_t c = 0; c < n; ++c) {
            const auto lc = corner(grid, c);
            double vol = 1.0;
            for (int a = 0; a < grid.dim() && vol > 0.0; ++a) {
                const double lo = std::max(lr[a], lc[a]);
                const double hi = std::min(lr[a], lc[a]) + grid.h();
                vol *= std::max(0.0, hi - lo);
            }
            m.at(r, c) = vol;
        }
    }
    return m;
}

Ultrafunction dense_project_measure(const RadonMeasureSpec& mu, const Grid& grid) {
    require_small(grid);
    const std::size_t n = grid.cell_count();
    std::vector<double> b(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        double pairing = 0.0;
        if (mu.density) pairing += cell_integral(*mu.density, corner(grid, v), grid.h());
        for (const auto& [fid, w] : mu.surface) pairing += w * regularized_basis_value(grid, v, face_centre(grid, fid));
        for (const auto& atom : mu.atoms) pairing += atom.mass * regularized_basis_value(grid, v, atom.point);
        b[v] = pairing;
    }
    gauss_solve(dense_mass(grid), b, 1);
    return Ultrafunction(grid, std::move(b));
}

DenseOperator dense_derivative(const Grid& grid, int axis) {
    require_small(grid);
    if (axis < 0 || axis >= grid.dim()) throw InvalidArgument("derivative axis out of range");
    const std::size_t n = grid.cell_count();
    const double area = std::pow(grid.h(), grid.dim() - 1);
    const double eps = 1e-7 * grid.h();

    // P(b, a) = sum over faces of jump(chi_a) * area * regularized chi_b
    std::vector<double> p(n * n, 0.0);
    for (std::size_t f = 0; f < grid.face_count(axis); ++f) {
        const std::vector<double> x = face_centre(grid, {axis, f});
        std::vector<double> below = x, above = x;
        below[axis] -= eps;
        above[axis] += eps;
        const std::size_t cm = locate(grid, below);
        const std::size_t cp = locate(grid, above);
        for (std::size_t a = 0; a < n; ++a) {
            const double jump = (cp == a ? 1.0 : 0.0) - (cm == a ? 1.0 : 0.0);
            if (jump == 0.0) continue;
            for (std::size_t b = 0; b < n; ++b) p[b * n + a] += jump * area * regularized_basis_value(grid, b, x);
        }
    }
    gauss_solve(dense_mass(grid), p, n);
    return DenseOperator{n, std::move(p)};
}

CompareReport compare(std::span<const double> fast, std::span<const double> dense, double tol) {
    if (fast.size() != dense.size()) throw InvalidArgument("compare: shape mismatch");
    CompareReport r;
    r.tolerance = tol;
    double ref = 0.0;
    for (double d : dense) ref = std::max(ref, std::abs(d));
    bool finite = true;
    for (std::size_t i = 0; i < fast.size(); ++i) {
        const double dev = std::abs(fast[i] - dense[i]);
        if (std::isnan(dev)) {
            finite = false;
            r.worst_index = i;
            continue;
        }
        if (dev > r.max_abs) {
            r.max_abs = dev;
            r.worst_index = i;
        }
        if (dense[i] != 0.0) r.max_rel = std::max(r.max_rel, dev / std::abs(dense[i]));
    }
    r.pass = finite && r.max_abs <= tol * std::max(1.0, ref);
    return r;
}

CompareReport compare(const Ultrafunction& fast, const Ultrafunction& dense, double tol) {
    require_same_grid(fast.grid(), dense.grid());
    return compare(fast.coeffs(), dense.coeffs(), tol);
}

CompareReport compare(const DerivOperator& fast, const DenseOperator& dense, double tol) {
    const std::size_t n = fast.grid().cell_count();
    if (dense.n != n) throw InvalidArgument("compare: shape mismatch");
    std::vector<double> full(n * n, 0.0);
    const auto& m = fast.matrix();
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) full[r * n + m.col[k]] = m.val[k];
    return compare(full, dense.a, tol);
}

}  // namespace uf::oracle
