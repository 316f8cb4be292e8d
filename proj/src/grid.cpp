#include "uf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "uf/error.hpp"

namespace uf {

Grid::Grid(std::vector<std::size_t> extent, std::vector<double> origin, double h)
    : extent_(std::move(extent)), origin_(std::move(origin)), h_(h) {
    if (extent_.empty()) throw InvalidArgument("grid dimension must be at least 1");
    if (origin_.size() != extent_.size())
        throw InvalidArgument("origin has " + std::to_string(origin_.size()) + " components, grid has " +
                              std::to_string(extent_.size()) + " axes");
    if (!(h_ > 0.0) || !std::isfinite(h_)) throw InvalidArgument("cell size h must be positive and finite");
    for (std::size_t a = 0; a < extent_.size(); ++a) {
        if (extent_[a] == 0) throw InvalidArgument("extent along axis " + std::to_string(a) + " must be positive");
        if (!std::isfinite(origin_[a])) throw InvalidArgument("origin must be finite");
    }
    const int n = dim();
    stride_.assign(n, 1);
    for (int a = n - 2; a >= 0; --a) stride_[a] = stride_[a + 1] * extent_[a + 1];
    cell_count_ = stride_[0] * extent_[0];
    cell_volume_ = std::pow(h_, n);
    face_area_ = std::pow(h_, n - 1);
}

std::size_t Grid::flatten(const CellIndex& idx) const {
    std::size_t id = 0;
    for (int a = 0; a < dim(); ++a) id += static_cast<std::size_t>(idx[a]) * stride_[a];
    return id;
}

CellIndex Grid::unflatten(std::size_t id) const {
    CellIndex idx(dim());
    for (int a = 0; a < dim(); ++a) idx[a] = coord(id, a);
    return idx;
}

bool Grid::contains(const CellIndex& idx) const {
    if (idx.size() != extent_.size()) return false;
    for (int a = 0; a < dim(); ++a)
        if (idx[a] < 0 || idx[a] >= static_cast<std::int64_t>(extent_[a])) return false;
    return true;
}

void Grid::cell_center(std::size_t id, std::span<double> out) const {
    for (int a = 0; a < dim(); ++a) out[a] = center(id, a);
}

std::vector<double> Grid::cell_center(std::size_t id) const {
    std::vector<double> x(dim());
    cell_center(id, x);
    return x;
}

std::size_t Grid::face_count(int axis) const {
    return cell_count_ / extent_[axis] * (extent_[axis] + 1);
}

FaceId Grid::face_id(int axis, const CellIndex& lattice) const {
    std::size_t id = 0;
    for (int a = 0; a < dim(); ++a) {
        const std::size_t e = a == axis ? extent_[a] + 1 : extent_[a];
        const auto k = lattice[a];
        if (k < 0 || static_cast<std::size_t>(k) >= e) throw InvalidArgument("face lattice index out of range");
        id = id * e + static_cast<std::size_t>(k);
    }
    return {axis, id};
}

CellIndex Grid::face_lattice(FaceId f) const {
    if (f.axis < 0 || f.axis >= dim()) throw InvalidArgument("face axis out of range");
    if (f.index >= face_count(f.axis)) throw InvalidArgument("face index out of range");
    CellIndex lat(dim());
    std::size_t rest = f.index;
    for (int a = dim() - 1; a >= 0; --a) {
        const std::size_t e = a == f.axis ? extent_[a] + 1 : extent_[a];
        lat[a] = static_cast<std::int64_t>(rest % e);
        rest /= e;
    }
    return lat;
}

Face Grid::face(FaceId f) const {
    CellIndex lat = face_lattice(f);
    const auto k = lat[f.axis];
    Face out;
    out.axis = f.axis;
    out.area = face_area_;
    if (k > 0) {
        lat[f.axis] = k - 1;
        out.minus_cell = flatten(lat);
    }
    if (k < static_cast<std::int64_t>(extent_[f.axis])) {
        lat[f.axis] = k;
        out.plus_cell = flatten(lat);
    }
    return out;
}

FaceId Grid::face_of(std::size_t cell, int axis, int dir) const {
    CellIndex lat = unflatten(cell);
    if (dir > 0) lat[axis] += 1;
    return face_id(axis, lat);
}

Grid build_grid(int dim, const std::vector<std::size_t>& extent, const std::vector<double>& origin, double h) {
    if (dim < 1) throw InvalidArgument("grid dimension must be at least 1");
    if (extent.size() != static_cast<std::size_t>(dim) || origin.size() != static_cast<std::size_t>(dim))
        throw InvalidArgument("extent and origin must have dim entries");
    for (auto e : extent)
        if (e < 2) throw InvalidArgument("every extent must be at least 2");
    return Grid(extent, origin, h);
}

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw GridMismatch();
}

Region::Region(Grid grid) : grid_(std::move(grid)), mask_(grid_.cell_count(), 0) {}

Region::Region(Grid grid, std::vector<std::uint8_t> mask) : grid_(std::move(grid)), mask_(std::move(mask)) {
    if (mask_.size() != grid_.cell_count()) throw InvalidArgument("region mask size does not match grid");
    for (auto& m : mask_) m = m ? 1 : 0;
}

Region Region::from_cells(Grid grid, const std::vector<CellIndex>& cells) {
    Region r(std::move(grid));
    for (const auto& c : cells) {
        if (!r.grid_.contains(c)) throw InvalidArgument("region cell outside the grid");
        r.mask_[r.grid_.flatten(c)] = 1;
    }
    return r;
}

Region Region::from_ids(Grid grid, const std::vector<std::size_t>& ids) {
    Region r(std::move(grid));
    for (auto id : ids) {
        if (id >= r.grid_.cell_count()) throw InvalidArgument("region cell outside the grid");
        r.mask_[id] = 1;
    }
    return r;
}

Region Region::box(Grid grid, const CellIndex& lo, const CellIndex& hi) {
    Region r(std::move(grid));
    const int n = r.grid_.dim();
    if (lo.size() != static_cast<std::size_t>(n) || hi.size() != static_cast<std::size_t>(n))
        throw InvalidArgument("box corners must have dim entries");
    for (std::size_t c = 0; c < r.grid_.cell_count(); ++c) {
        bool in = true;
        for (int a = 0; a < n && in; ++a) {
            const auto k = r.grid_.coord(c, a);
            in = k >= lo[a] && k < hi[a];
        }
        r.mask_[c] = in ? 1 : 0;
    }
    return r;
}

Region Region::full(Grid grid) {
    Region r(std::move(grid));
    std::fill(r.mask_.begin(), r.mask_.end(), 1);
    return r;
}

std::vector<std::size_t> Region::cells() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < mask_.size(); ++c)
        if (mask_[c]) out.push_back(c);
    return out;
}

std::size_t Region::size() const {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

Region region_union(const Region& a, const Region& b) {
    require_same_grid(a.grid(), b.grid());
    std::vector<std::uint8_t> m(a.mask().size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = a.mask()[i] | b.mask()[i];
    return Region(a.grid(), std::move(m));
}

Region region_intersection(const Region& a, const Region& b) {
    require_same_grid(a.grid(), b.grid());
    std::vector<std::uint8_t> m(a.mask().size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = a.mask()[i] & b.mask()[i];
    return Region(a.grid(), std::move(m));
}

double region_volume(const Region& omega) {
    return static_cast<double>(omega.size()) * omega.grid().cell_volume();
}

std::vector<BoundaryFace> boundary_faces(const Region& omega) {
    const Grid& g = omega.grid();
    std::vector<BoundaryFace> out;
    for (int axis = 0; axis < g.dim(); ++axis) {
        for (std::size_t f = 0; f < g.face_count(axis); ++f) {
            const FaceId id{axis, f};
            const Face face = g.face(id);
            const bool in_minus = omega.contains(face.minus_cell);
            const bool in_plus = omega.contains(face.plus_cell);
            if (in_minus != in_plus) out.push_back({id, face, in_minus ? 1 : -1});
        }
    }
    return out;
}

double region_perimeter(const Region& omega) {
    double p = 0.0;
    for (const auto& bf : boundary_faces(omega)) p += bf.face.area;
    return p;
}

}  // namespace uf
