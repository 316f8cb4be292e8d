#include "uf/lebesgue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uf/error.hpp"

namespace uf {

EtaRadius::EtaRadius(double eta) : eta_(eta) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be positive and finite");
}

void EtaRadius::require_fits(const Grid& grid) const {
    if (!(eta_ < 0.5 * grid.h()))
        throw InvalidArgument("eta must be smaller than h/2 (eta=" + std::to_string(eta_) +
                              ", h=" + std::to_string(grid.h()) + ")");
}

BallAverage lebesgue_average(const PointFunction& f, std::span<const double> x, EtaRadius eta) {
    return ball_average(f, x, eta.value());
}

namespace {

struct AxisCut {
    std::int64_t cell = 0;   // cell coordinate when no face is crossed
    bool crossed = false;
    std::int64_t face = 0;   // lattice position of the crossed face
    double offset = 0.0;     // x - face position (>= 0: x on the plus side)
};

double cell_value(const Ultrafunction& u, const std::vector<std::int64_t>& idx) {
    const Grid& g = u.grid();
    std::size_t id = 0;
    for (int a = 0; a < g.dim(); ++a) {
        if (idx[a] < 0 || idx[a] >= static_cast<std::int64_t>(g.extent(a))) return 0.0;
        id += static_cast<std::size_t>(idx[a]) * g.stride(a);
    }
    return u[id];
}

}  // namespace

double lebesgue_average(const Ultrafunction& u, std::span<const double> x, EtaRadius eta) {
    const Grid& g = u.grid();
    eta.require_fits(g);
    const int n = g.dim();
    if (x.size() != static_cast<std::size_t>(n)) throw InvalidArgument("point dimension does not match grid");
    const double h = g.h();
    const double r = eta.value();

    std::vector<AxisCut> cuts(n);
    std::vector<int> crossed;
    for (int a = 0; a < n; ++a) {
        const double s = (x[a] - g.lower(a)) / h;
        const double k = std::round(s);
        AxisCut& cut = cuts[a];
        if (std::abs(s - k) <= 1e-12 * std::max(1.0, std::abs(s))) {
            cut.crossed = true;
            cut.face = static_cast<std::int64_t>(k);
            cut.offset = 0.0;
        } else {
            const double k0 = std::floor(s);
            const double below = (s - k0) * h;
            const double above = (k0 + 1.0 - s) * h;
            cut.cell = static_cast<std::int64_t>(k0);
            // caps thinner than 1e-12 r hold under 1e-18 of the ball and are dropped
            const double reach = r * (1.0 - 1e-12);
            if (below < reach) {
                cut.crossed = true;
                cut.face = cut.cell;
                cut.offset = below;
            } else if (above < reach) {
                cut.crossed = true;
                cut.face = cut.cell + 1;
                cut.offset = -above;
            }
        }
        if (cut.crossed) crossed.push_back(a);
    }

    std::vector<std::int64_t> idx(n);
    for (int a = 0; a < n; ++a) idx[a] = cuts[a].cell;
    if (crossed.empty()) return cell_value(u, idx);

    // Accumulated as offsets from the value of the cell holding x, so a ball
    // that sees a single value returns it exactly.
    if (crossed.size() == 1) {
        const AxisCut& cut = cuts[crossed[0]];
        const double far = cap_fraction(n, std::abs(cut.offset) / r);
        const double plus_share = cut.offset >= 0.0 ? 1.0 - far : far;
        idx[crossed[0]] = cut.face;
        const double vp = cell_value(u, idx);
        idx[crossed[0]] = cut.face - 1;
        const double vm = cell_value(u, idx);
        return vm + plus_share * (vp - vm);
    }

    const bool symmetric =
        std::all_of(crossed.begin(), crossed.end(), [&](int a) { return cuts[a].offset == 0.0; });
    const std::size_t patterns = std::size_t{1} << crossed.size();
    const double vol = ball_volume(n, r);
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> lo(n, -inf), hi(n, inf);
    for (int a : crossed) idx[a] = cuts[a].offset >= 0.0 ? cuts[a].face : cuts[a].face - 1;
    const double base = cell_value(u, idx);
    double value = 0.0;
    for (std::size_t m = 0; m < patterns; ++m) {
        for (std::size_t i = 0; i < crossed.size(); ++i) {
            const int a = crossed[i];
            const bool plus = (m >> i) & 1u;
            idx[a] = plus ? cuts[a].face : cuts[a].face - 1;
            // face sits at -offset relative to the ball centre
            lo[a] = plus ? -cuts[a].offset : -inf;
            hi[a] = plus ? inf : -cuts[a].offset;
        }
        const double v = cell_value(u, idx);
        const double w = symmetric ? 1.0 / static_cast<double>(patterns) : ball_box_volume(r, lo, hi) / vol;
        value += w * (v - base);
    }
    return base + value;
}

RegularizedFunction regularize(const Ultrafunction& u) {
    const Grid& g = u.grid();
    RegularizedFunction out{u, {}};
    out.trace.resize(g.dim());
    for (int axis = 0; axis < g.dim(); ++axis) {
        auto& t = out.trace[axis];
        t.resize(g.face_count(axis));
        for (std::size_t f = 0; f < t.size(); ++f) {
            const Face face = g.face({axis, f});
            const double vm = face.minus_cell == kExterior ? 0.0 : u[face.minus_cell];
            const double vp = face.plus_cell == kExterior ? 0.0 : u[face.plus_cell];
            t[f] = 0.5 * (vm + vp);
        }
    }
    return out;
}

RegularizedFunction regularized_characteristic(const Region& omega) {
    return regularize(Ultrafunction::indicator(omega));
}

IdempotenceReport check_idempotence(const Ultrafunction& f, const std::vector<std::vector<double>>& points,
                                    EtaRadius eta, double tolerance) {
    IdempotenceReport rep;
    rep.tolerance = tolerance;
    const PointFunction once = [&](std::span<const double> y) { return lebesgue_average(f, y, eta); };
    for (const auto& x : points) {
        IdempotencePoint p;
        p.x = x;
        p.single = lebesgue_average(f, x, eta);
        p.twice = lebesgue_average(once, x, eta).value;
        p.deviation = std::abs(p.twice - p.single);
        rep.max_deviation = std::max(rep.max_deviation, p.deviation);
        if (p.deviation > tolerance) rep.violations.push_back(rep.points.size());
        rep.points.push_back(std::move(p));
    }
    return rep;
}

}  // namespace uf
