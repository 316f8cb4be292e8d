#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace uf {

using CellIndex = std::vector<std::int64_t>;

// Sentinel for the cell on the far side of a face on the grid box boundary.
inline constexpr std::size_t kExterior = std::numeric_limits<std::size_t>::max();

// A face of the grid, identified by its normal axis and its position in the
// face lattice of that axis (extent+1 positions along the axis, extent along
// the others). Row-major like cells.
struct FaceId {
    int axis = 0;
    std::size_t index = 0;

    friend bool operator==(const FaceId&, const FaceId&) = default;
    friend auto operator<=>(const FaceId&, const FaceId&) = default;
};

struct Face {
    int axis = 0;
    std::size_t minus_cell = kExterior;
    std::size_t plus_cell = kExterior;
    double area = 0.0;
};

/// Uniform Cartesian box of N-dimensional cubic cells of edge h.
///
/// Cells are numbered row-major (last axis fastest). The box
/// [origin, origin + extent*h] is the ambient domain; everything outside it
/// is treated as value 0.
class Grid {
public:
    Grid(std::vector<std::size_t> extent, std::vector<double> origin, double h);

    int dim() const { return static_cast<int>(extent_.size()); }
    std::size_t extent(int axis) const { return extent_[axis]; }
    const std::vector<std::size_t>& extents() const { return extent_; }
    const std::vector<double>& origin() const { return origin_; }
    double h() const { return h_; }
    std::size_t cell_count() const { return cell_count_; }
    std::size_t stride(int axis) const { return stride_[axis]; }

    // h^N and h^(N-1).
    double cell_volume() const { return cell_volume_; }
    double face_area() const { return face_area_; }

    double lower(int axis) const { return origin_[axis]; }
    double upper(int axis) const { return origin_[axis] + static_cast<double>(extent_[axis]) * h_; }

    std::size_t flatten(const CellIndex& idx) const;
    CellIndex unflatten(std::size_t id) const;
    bool contains(const CellIndex& idx) const;

    // Coordinate of the cell along one axis.
    std::int64_t coord(std::size_t id, int axis) const {
        return static_cast<std::int64_t>((id / stride_[axis]) % extent_[axis]);
    }
    double center(std::size_t id, int axis) const {
        return origin_[axis] + (static_cast<double>(coord(id, axis)) + 0.5) * h_;
    }
    void cell_center(std::size_t id, std::span<double> out) const;
    std::vector<double> cell_center(std::size_t id) const;

    // Neighbour along axis in direction dir (+1/-1), or kExterior.
    std::size_t neighbor(std::size_t id, int axis, int dir) const {
        const auto c = coord(id, axis);
        if (dir > 0) return c + 1 < static_cast<std::int64_t>(extent_[axis]) ? id + stride_[axis] : kExterior;
        return c > 0 ? id - stride_[axis] : kExterior;
    }

    // Faces of the lattice normal to `axis`.
    std::size_t face_count(int axis) const;
    Face face(FaceId f) const;
    // Face on side dir (+1/-1) of a cell.
    FaceId face_of(std::size_t cell, int axis, int dir) const;
    // Face lattice coordinates <-> id.
    FaceId face_id(int axis, const CellIndex& lattice) const;
    CellIndex face_lattice(FaceId f) const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::vector<std::size_t> extent_;
    std::vector<double> origin_;
    double h_;
    std::vector<std::size_t> stride_;
    std::size_t cell_count_;
    double cell_volume_;
    double face_area_;
};

// Validating constructor: dim >= 1, every extent >= 2, h > 0.
Grid build_grid(int dim, const std::vector<std::size_t>& extent, const std::vector<double>& origin, double h);

void require_same_grid(const Grid& a, const Grid& b);

/// A finite union of grid cells: the stage representative of a bounded
/// Caccioppoli set. Stored as a membership mask over the grid.
class Region {
public:
    explicit Region(Grid grid);
    Region(Grid grid, std::vector<std::uint8_t> mask);

    static Region from_cells(Grid grid, const std::vector<CellIndex>& cells);
    static Region from_ids(Grid grid, const std::vector<std::size_t>& ids);
    // Cells with lo[a] <= coord[a] < hi[a].
    static Region box(Grid grid, const CellIndex& lo, const CellIndex& hi);
    static Region full(Grid grid);
    // Cells whose centre satisfies pred.
    template <class Pred>
    static Region from_centers(Grid grid, Pred&& pred) {
        Region r(std::move(grid));
        std::vector<double> x(r.grid_.dim());
        for (std::size_t c = 0; c < r.grid_.cell_count(); ++c) {
            r.grid_.cell_center(c, x);
            r.mask_[c] = pred(std::span<const double>(x)) ? 1 : 0;
        }
        return r;
    }

    const Grid& grid() const { return grid_; }
    bool contains(std::size_t id) const { return id != kExterior && mask_[id] != 0; }
    const std::vector<std::uint8_t>& mask() const { return mask_; }
    std::vector<std::size_t> cells() const;
    std::size_t size() const;
    bool empty() const { return size() == 0; }

    friend bool operator==(const Region&, const Region&) = default;

private:
    Grid grid_;
    std::vector<std::uint8_t> mask_;
};

Region region_union(const Region& a, const Region& b);
Region region_intersection(const Region& a, const Region& b);
double region_volume(const Region& omega);

struct BoundaryFace {
    FaceId id;
    Face face;
    // +1 when the outward normal points along +axis.
    int outward = 1;
};

// Faces with exactly one side in the region, each listed once, ordered by
// (axis, face id).
std::vector<BoundaryFace> boundary_faces(const Region& omega);

// Sum of the boundary face areas, accumulated in boundary_faces() order.
double region_perimeter(const Region& omega);

}  // namespace uf
