#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "support/gen.hpp"
#include "uf/error.hpp"
#include "uf/grid.hpp"

using uf::Grid;
using uf::Region;

namespace {

// Perimeter by scanning every cell of the region and every axis direction:
// a side counts when the neighbour there is outside the region or the box.
double brute_perimeter(const Region& r) {
    const Grid& g = r.grid();
    double p = 0.0;
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        if (!r.contains(c)) continue;
        const uf::CellIndex idx = g.unflatten(c);
        for (int a = 0; a < g.dim(); ++a) {
            for (int d : {-1, 1}) {
                uf::CellIndex n = idx;
                n[a] += d;
                if (!g.contains(n) || !r.contains(g.flatten(n))) p += g.face_area();
            }
        }
    }
    return p;
}

}  // namespace

TEST_CASE("build_grid tiles the box") {
    const Grid g1 = uf::build_grid(1, {4}, {0.0}, 0.25);
    CHECK(g1.cell_count() == 4);
    CHECK(g1.upper(0) == 1.0);
    CHECK(g1.cell_volume() == 0.25);

    const Grid g2 = uf::build_grid(2, {3, 3}, {0.0, 0.0}, 1.0);
    CHECK(g2.cell_count() == 9);
    CHECK(g2.cell_volume() == 1.0);

    const Grid g3 = uf::build_grid(3, {2, 2, 2}, {-1.0, -1.0, -1.0}, 1.0);
    CHECK(g3.cell_count() == 8);
    for (int a = 0; a < 3; ++a) {
        CHECK(g3.lower(a) == -1.0);
        CHECK(g3.upper(a) == 1.0);
    }
}

TEST_CASE("build_grid rejects bad input") {
    CHECK_THROWS_AS(uf::build_grid(1, {0}, {0.0}, 1.0), uf::InvalidArgument);
    CHECK_THROWS_AS(uf::build_grid(1, {1}, {0.0}, 1.0), uf::InvalidArgument);
    CHECK_THROWS_AS(uf::build_grid(1, {4}, {0.0}, 0.0), uf::InvalidArgument);
    CHECK_THROWS_AS(uf::build_grid(1, {4}, {0.0}, -1.0), uf::InvalidArgument);
    CHECK_THROWS_AS(uf::build_grid(0, {}, {}, 1.0), uf::InvalidArgument);
    CHECK_THROWS_AS(uf::build_grid(2, {4}, {0.0}, 1.0), uf::InvalidArgument);
}

TEST_CASE("flatten and unflatten are inverse, last axis fastest") {
    const Grid g({3, 4, 5}, {0.0, 0.0, 0.0}, 1.0);
    for (std::size_t c = 0; c < g.cell_count(); ++c) CHECK(g.flatten(g.unflatten(c)) == c);
    CHECK(g.flatten({0, 0, 1}) == 1);
    CHECK(g.flatten({0, 1, 0}) == 5);
    CHECK(g.flatten({1, 0, 0}) == 20);
}

TEST_CASE("faces connect axis neighbours or the exterior") {
    const Grid g({3, 2}, {0.0, 0.0}, 0.5);
    for (int a = 0; a < 2; ++a) {
        for (std::size_t f = 0; f < g.face_count(a); ++f) {
            const uf::Face face = g.face({a, f});
            CHECK(face.area == 0.5);
            const bool ext_m = face.minus_cell == uf::kExterior;
            const bool ext_p = face.plus_cell == uf::kExterior;
            REQUIRE_FALSE((ext_m && ext_p));
            if (!ext_m && !ext_p) CHECK(g.neighbor(face.minus_cell, a, +1) == face.plus_cell);
        }
    }
    CHECK(g.face_count(0) == 4 * 2);
    CHECK(g.face_count(1) == 3 * 3);
}

TEST_CASE("region union and intersection") {
    const Grid g({3, 3}, {0.0, 0.0}, 1.0);
    const Region a = Region::from_cells(g, {{0, 0}});
    const Region b = Region::from_cells(g, {{1, 2}});
    const Region u = uf::region_union(a, b);
    CHECK(u.cells() == std::vector<std::size_t>{0, 5});
    CHECK(uf::region_intersection(u, u) == u);
    CHECK(uf::region_intersection(u, Region(g)).empty());

    const Grid other({3, 3}, {0.0, 0.0}, 0.5);
    CHECK_THROWS_AS(uf::region_union(a, Region(other)), uf::GridMismatch);
}

TEST_CASE("region volume") {
    const Grid g({3, 3}, {0.0, 0.0}, 1.0);
    CHECK(uf::region_volume(Region::full(g)) == 9.0);
    CHECK(uf::region_volume(Region(g)) == 0.0);
    const Grid h({4, 4}, {0.0, 0.0}, 0.5);
    CHECK(uf::region_volume(Region::box(h, {0, 0}, {2, 2})) == 1.0);
}

TEST_CASE("boundary faces") {
    const Grid g({3, 3}, {0.0, 0.0}, 1.0);
    CHECK(uf::boundary_faces(Region::from_cells(g, {{1, 1}})).size() == 4);
    CHECK(uf::boundary_faces(Region::from_cells(g, {{1, 0}, {1, 1}})).size() == 6);

    const auto full = uf::boundary_faces(Region::full(g));
    CHECK(full.size() == 12);
    for (const auto& bf : full) {
        const bool on_box = bf.face.minus_cell == uf::kExterior || bf.face.plus_cell == uf::kExterior;
        CHECK(on_box);
    }

    // outward sign points away from the region
    for (const auto& bf : uf::boundary_faces(Region::from_cells(g, {{1, 1}}))) {
        const std::size_t inside = bf.outward > 0 ? bf.face.minus_cell : bf.face.plus_cell;
        CHECK(inside == g.flatten({1, 1}));
    }
}

TEST_CASE("region perimeter examples") {
    const Grid one({2, 2}, {0.0, 0.0}, 1.0);
    CHECK(uf::region_perimeter(Region::from_cells(one, {{0, 0}})) == 4.0);

    const Grid half({4, 4}, {0.0, 0.0}, 0.5);
    CHECK(uf::region_perimeter(Region::box(half, {1, 1}, {3, 3})) == 4.0);

    const Grid g({3, 3}, {0.0, 0.0}, 1.0);
    const Region ell = Region::from_cells(g, {{0, 0}, {1, 0}, {1, 1}});
    CHECK(brute_perimeter(ell) == 8.0);
    CHECK(uf::region_perimeter(ell) == 8.0);
}

TEST_CASE("property: perimeter agrees with a brute-force scan and with boundary_faces bit for bit") {
    gen::Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Grid g = gen::grid(rng);
        const Region r = gen::region(g, rng);
        const auto faces = uf::boundary_faces(r);
        std::set<uf::FaceId> seen;
        double sum = 0.0;
        for (const auto& bf : faces) {
            CHECK(seen.insert(bf.id).second);
            sum += bf.face.area;
        }
        CHECK(sum == uf::region_perimeter(r));
        CHECK(uf::region_perimeter(r) == Catch::Approx(brute_perimeter(r)).epsilon(1e-14));
    }
}

TEST_CASE("property: perimeter is submodular and volume is modular") {
    gen::Rng rng(12);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t nx = 2 + rng.index(4), ny = 2 + rng.index(4);
        const Grid g({nx, ny}, {0.0, 0.0}, 1.0);
        const Region a = gen::region(g, rng, rng.uniform());
        const Region b = gen::region(g, rng, rng.uniform());
        const Region u = uf::region_union(a, b), i = uf::region_intersection(a, b);
        CHECK(uf::region_perimeter(u) + uf::region_perimeter(i) <= uf::region_perimeter(a) + uf::region_perimeter(b));
        CHECK(uf::region_volume(u) + uf::region_volume(i) == uf::region_volume(a) + uf::region_volume(b));
    }
}
