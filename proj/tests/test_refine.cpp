#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "uf/error.hpp"
#include "uf/refine.hpp"

using uf::Grid;

TEST_CASE("refine_chain bookkeeping") {
    const Grid base({4}, {0.0}, 0.25);
    const auto t = uf::refine_chain("h", base, 3, [](const Grid& g) { return g.h(); });
    REQUIRE(t.stages.size() == 3);
    CHECK(t.stages[2].h == 0.0625);
    CHECK(t.stages[2].value == 0.0625);
    CHECK(std::isnan(t.stages[0].diff));
    CHECK(std::isnan(t.stages[1].diff_rate));
    CHECK(t.stages[1].value_rate == 1.0);
    CHECK(t.stages[2].diff_rate == 1.0);
    CHECK_THROWS_AS(uf::refine_chain("h", base, 1, [](const Grid&) { return 0.0; }), uf::InvalidArgument);
}

TEST_CASE("region integral differences shrink like h") {
    // the cell union of {x < 1/3} ends at 1/4, 3/8, 5/16, 11/32, ...
    const Grid base({4, 4}, {0.0, 0.0}, 0.25);
    const auto strip = [](std::span<const double> x) { return x[0] < 1.0 / 3.0; };
    const auto t = uf::refine_region_integral("1 + x*y", strip, base, 6);
    for (std::size_t k = 2; k < t.stages.size(); ++k) CHECK(t.stages[k].diff_rate == Catch::Approx(1.0).epsilon(0).margin(0.1));
    const double exact = 1.0 / 3.0 + 1.0 / 36.0;
    CHECK(std::abs(t.stages.back().value - exact) < 0.01);
}

TEST_CASE("Gauss residual is flat at round-off") {
    const Grid base({6, 6}, {-1.5, -1.5}, 0.5);
    const auto box = [](std::span<const double> x) { return std::abs(x[0]) < 0.8 && std::abs(x[1]) < 0.6; };
    const auto t = uf::refine_gauss_residual({"sin(x)*y", "exp(-r*r)"}, box, base, 4);
    for (const auto& s : t.stages) CHECK(s.value <= 1e-13);
}

TEST_CASE("centred derivative has Richardson slope 2") {
    const Grid base({16}, {0.0}, 1.0 / 16);
    const auto t = uf::refine_derivative_error("sin(x)", "cos(x)", 0, base, 3);
    CHECK(t.stages[1].value_rate == Catch::Approx(2.0).epsilon(0).margin(0.1));
    CHECK(t.stages[2].value_rate == Catch::Approx(2.0).epsilon(0).margin(0.1));
}

TEST_CASE("point values and max |u|") {
    const Grid base({4}, {0.0}, 0.25);
    const std::vector<double> p{0.5};
    const auto t = uf::refine_point_value("x", p, base, 3);
    for (const auto& s : t.stages) CHECK(s.value == Catch::Approx(0.5).epsilon(0).margin(1e-14));

    const Grid line({32}, {-1.0}, 1.0 / 16);
    const auto m = uf::refine_max_u("0", "burgers", 0.1, line, 2);
    for (const auto& s : m.stages) CHECK(s.value == 0.0);
}
