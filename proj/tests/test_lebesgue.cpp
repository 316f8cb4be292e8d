#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "support/gen.hpp"
#include "uf/error.hpp"
#include "uf/lebesgue.hpp"
#include "uf/quadrature.hpp"

using uf::EtaRadius;
using uf::Grid;
using uf::Region;
using uf::Ultrafunction;

TEST_CASE("ball average of general functions") {
    const std::vector<double> x{0.4, -0.2};
    CHECK(uf::lebesgue_average([](std::span<const double>) { return 3.5; }, x, EtaRadius(0.1)).value ==
          Catch::Approx(3.5).epsilon(0).margin(1e-14));

    const std::vector<double> p{0.3};
    CHECK(uf::lebesgue_average([](std::span<const double> y) { return y[0]; }, p, EtaRadius(0.01)).value ==
          Catch::Approx(0.3).epsilon(0).margin(1e-15));

    // indicator of a half-space, centre on the hyperplane
    for (int dim = 1; dim <= 3; ++dim) {
        const std::vector<double> c(dim, 0.0);
        const auto half = [](std::span<const double> y) { return y[0] >= 0.0 ? 1.0 : 0.0; };
        CHECK(uf::lebesgue_average(half, c, EtaRadius(0.05)).value == Catch::Approx(0.5).epsilon(0).margin(1e-12));
    }
}

TEST_CASE("eta must be positive and below h/2") {
    CHECK_THROWS_AS(EtaRadius(0.0), uf::InvalidArgument);
    CHECK_THROWS_AS(EtaRadius(-1.0), uf::InvalidArgument);
    const Grid g({4}, {0.0}, 0.25);
    const Ultrafunction u = Ultrafunction::constant(g, 1.0);
    const std::vector<double> x{0.5};
    CHECK_THROWS_AS(uf::lebesgue_average(u, x, EtaRadius(0.125)), uf::InvalidArgument);
    CHECK_NOTHROW(uf::lebesgue_average(u, x, EtaRadius(0.12)));
}

TEST_CASE("piecewise-constant ball averages") {
    const Grid g({4, 4}, {0.0, 0.0}, 1.0);
    const Region omega = Region::box(g, {0, 0}, {2, 4});  // x < 2
    const Ultrafunction chi = Ultrafunction::indicator(omega);
    const EtaRadius eta(0.3);

    const std::vector<double> inside{1.5, 2.5}, outside{2.5, 2.5}, face{2.0, 2.5};
    CHECK(uf::lebesgue_average(chi, inside, eta) == 1.0);
    CHECK(uf::lebesgue_average(chi, outside, eta) == 0.0);
    CHECK(uf::lebesgue_average(chi, face, eta) == 0.5);

    // single face at distance d: the far side holds the cap fraction
    const std::vector<double> near{1.9, 2.5};
    const double cap = uf::cap_fraction(2, 0.1 / 0.3);
    CHECK(uf::lebesgue_average(chi, near, eta) == Catch::Approx(1.0 - cap).epsilon(1e-15));

    // a vertex shared by four cells
    Ultrafunction u(g);
    u[g.flatten({0, 0})] = 1.0;
    u[g.flatten({0, 1})] = 2.0;
    u[g.flatten({1, 0})] = 3.0;
    u[g.flatten({1, 1})] = 4.0;
    const std::vector<double> vertex{1.0, 1.0};
    CHECK(uf::lebesgue_average(u, vertex, eta) == 2.5);

    // off-centre near a vertex: exact orthant volumes
    const std::vector<double> off{1.1, 0.95};
    const double r = 0.3;
    const double inf = std::numeric_limits<double>::infinity();
    auto orth = [&](double lo0, double hi0, double lo1, double hi1) {
        const std::vector<double> lo{lo0, lo1}, hi{hi0, hi1};
        return uf::ball_box_volume(r, lo, hi) / uf::ball_volume(2, r);
    };
    // face x = 1 sits at -0.1 from the centre, face y = 1 at +0.05
    const double w00 = orth(-inf, -0.1, -inf, 0.05), w01 = orth(-inf, -0.1, 0.05, inf);
    const double w10 = orth(-0.1, inf, -inf, 0.05), w11 = orth(-0.1, inf, 0.05, inf);
    CHECK(w00 + w01 + w10 + w11 == Catch::Approx(1.0).epsilon(0).margin(1e-14));
    CHECK(uf::lebesgue_average(u, off, eta) ==
          Catch::Approx(1.0 * w00 + 2.0 * w01 + 3.0 * w10 + 4.0 * w11).epsilon(1e-14));
}

TEST_CASE("property: cell-interior points return the cell value exactly") {
    gen::Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const Grid g = gen::grid(rng);
        const Ultrafunction u = gen::function(g, rng);
        const double eta = 0.2 * g.h();
        const std::size_t c = rng.index(g.cell_count());
        std::vector<double> x(g.dim());
        for (int a = 0; a < g.dim(); ++a)
            x[a] = g.lower(a) + (static_cast<double>(g.coord(c, a)) + rng.uniform(0.21, 0.79)) * g.h();
        CHECK(uf::lebesgue_average(u, x, EtaRadius(eta)) == u[c]);
    }
}

TEST_CASE("property: functions identical cellwise have identical averages") {
    gen::Rng rng(22);
    const Grid g({5, 5}, {0.0, 0.0}, 0.2);
    const Ultrafunction u = gen::function(g, rng);
    const Ultrafunction v(g, std::vector<double>(u.coeffs().begin(), u.coeffs().end()));
    for (int k = 0; k < 200; ++k) {
        const std::vector<double> x{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
        CHECK(uf::lebesgue_average(u, x, EtaRadius(0.07)) == uf::lebesgue_average(v, x, EtaRadius(0.07)));
    }
}

TEST_CASE("regularized characteristic: cells and face traces") {
    const Grid g({4, 4}, {0.0, 0.0}, 1.0);
    const Region omega = Region::box(g, {1, 1}, {3, 3});
    const uf::RegularizedFunction chi = uf::regularized_characteristic(omega);
    CHECK(chi.cells[g.flatten({1, 1})] == 1.0);
    CHECK(chi.cells[g.flatten({0, 0})] == 0.0);

    // face between (1,1) and (2,1): interior to omega
    CHECK(chi.face_value(g.face_of(g.flatten({1, 1}), 0, +1)) == 1.0);
    // face between (0,1) and (1,1): on the boundary
    CHECK(chi.face_value(g.face_of(g.flatten({1, 1}), 0, -1)) == 0.5);
    // face between (0,0) and (1,0): outside
    CHECK(chi.face_value(g.face_of(g.flatten({0, 0}), 0, +1)) == 0.0);

    // idempotent as a map on (cells, traces)
    CHECK(uf::regularize(chi.cells) == chi);
}

TEST_CASE("regularized traces treat the exterior as 0") {
    const Grid g({3}, {0.0}, 1.0);
    const auto r = uf::regularize(Ultrafunction::constant(g, 2.0));
    CHECK(r.trace[0].front() == 1.0);
    CHECK(r.trace[0].back() == 1.0);
    CHECK(r.trace[0][1] == 2.0);
}

TEST_CASE("double average equals the single average at interior and face points") {
    const Grid g({4, 4}, {0.0, 0.0}, 1.0);
    const Region omega = Region::box(g, {1, 1}, {3, 3});
    const Ultrafunction chi = Ultrafunction::indicator(omega);
    const EtaRadius eta(0.1);
    const std::vector<std::vector<double>> pts{{1.5, 1.5}, {0.5, 0.5}, {1.0, 1.5}, {2.0, 2.5}, {1.5, 3.0}};
    const auto rep = uf::check_idempotence(chi, pts, eta);
    CHECK(rep.ok());
    CHECK(rep.points[2].single == 0.5);
    CHECK(rep.points[2].twice == Catch::Approx(0.5).epsilon(0).margin(1e-10));
}

TEST_CASE("property: idempotence on random piecewise-constant functions") {
    gen::Rng rng(23);
    const Grid g({5, 5}, {0.0, 0.0}, 0.2);
    const Ultrafunction f = gen::function(g, rng);
    const double eta = 0.03;
    // points farther than 2 eta from every face, plus face midpoints
    std::vector<std::vector<double>> pts;
    while (pts.size() < 100) {
        std::vector<double> x(2);
        bool clear = true;
        for (int a = 0; a < 2; ++a) {
            x[a] = rng.uniform(0.0, 1.0);
            const double s = x[a] / g.h();
            const double dist = std::abs(s - std::round(s)) * g.h();
            if (dist <= 2.0 * eta) clear = false;
        }
        if (clear) pts.push_back(x);
    }
    for (int k = 1; k < 5; ++k) pts.push_back({k * 0.2, 0.3});
    const auto rep = uf::check_idempotence(f, pts, EtaRadius(eta));
    CHECK(rep.max_deviation <= 1e-10);
    CHECK(rep.ok());
}

TEST_CASE("property: a ball meeting a single value returns it exactly") {
    gen::Rng rng(24);
    const Grid g({6, 6, 6}, {0.0, 0.0, 0.0}, 0.25);
    const Ultrafunction one = Ultrafunction::constant(g, 0.7);
    for (int k = 0; k < 300; ++k) {
        // stay at least eta inside the box so the exterior is not seen
        const double eta = rng.uniform(0.01, 0.12);
        std::vector<double> x(3);
        for (double& xi : x) xi = rng.uniform(eta, 1.5 - eta);
        if (rng.coin(0.3)) x[0] = 0.25 * static_cast<double>(1 + rng.index(5));
        CHECK(uf::lebesgue_average(one, x, EtaRadius(eta)) == 0.7);
    }
}
