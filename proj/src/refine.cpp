#include "uf/refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uf/calculus.hpp"
#include "uf/conservation.hpp"
#include "uf/error.hpp"
#include "uf/expr.hpp"
#include "uf/ultraspace.hpp"

namespace uf {

RefineTable refine_chain(const std::string& name, const Grid& base, int levels,
                         const std::function<double(const Grid&)>& value) {
    if (levels < 2) throw InvalidArgument("a refinement chain needs at least 2 stages");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    RefineTable table{name, {}};
    Grid g = base;
    for (int k = 0; k < levels; ++k) {
        if (k > 0) g = refine_grid(g);
        RefineStage s;
        s.level = k;
        s.h = g.h();
        s.value = value(g);
        s.diff = nan;
        s.value_rate = nan;
        s.diff_rate = nan;
        if (k > 0) {
            const RefineStage& p = table.stages.back();
            s.diff = s.value - p.value;
            s.value_rate = std::log2(std::abs(p.value) / std::abs(s.value));
            if (k > 1) s.diff_rate = std::log2(std::abs(p.diff) / std::abs(s.diff));
        }
        table.stages.push_back(s);
    }
    return table;
}

namespace {

Ultrafunction project_expr(const Expression& e, const Grid& g) { return project_function(to_point_function(e), g).function; }

}  // namespace

RefineTable refine_region_integral(const std::string& f_expr, const std::function<bool(std::span<const double>)>& inside,
                                   const Grid& base, int levels) {
    const Expression f = Expression::parse(f_expr);
    return refine_chain("region-integral", base, levels, [&](const Grid& g) {
        return region_integral(project_expr(f, g), Region::from_centers(g, inside));
    });
}

RefineTable refine_gauss_residual(const std::vector<std::string>& phi_exprs,
                                  const std::function<bool(std::span<const double>)>& inside, const Grid& base,
                                  int levels) {
    if (phi_exprs.size() != static_cast<std::size_t>(base.dim()))
        throw InvalidArgument("need one field component per axis");
    std::vector<Expression> parts;
    for (const auto& s : phi_exprs) parts.push_back(Expression::parse(s));
    return refine_chain("gauss-residual", base, levels, [&](const Grid& g) {
        std::vector<Ultrafunction> comps;
        for (const auto& e : parts) comps.push_back(project_expr(e, g));
        const GaussReport r = gauss_check(VectorUltrafunction(std::move(comps)), Region::from_centers(g, inside));
        return r.scale > 0.0 ? r.pointwise_residual / r.scale : r.pointwise_residual;
    });
}

RefineTable refine_derivative_error(const std::string& f_expr, const std::string& df_expr, int axis,
                                    const Grid& base, int levels, int margin) {
    if (axis < 0 || axis >= base.dim()) throw InvalidArgument("derivative axis out of range");
    const Expression f = Expression::parse(f_expr);
    const PointFunction df = to_point_function(Expression::parse(df_expr));
    return refine_chain("derivative-error", base, levels, [&](const Grid& g) {
        const Ultrafunction d = operators_for(g)->d(axis).apply(project_expr(f, g));
        double worst = 0.0;
        for (std::size_t c = 0; c < g.cell_count(); ++c) {
            bool interior = true;
            for (int a = 0; a < g.dim(); ++a) {
                const auto k = g.coord(c, a);
                if (k < margin || k >= static_cast<std::int64_t>(g.extent(a)) - margin) interior = false;
            }
            if (!interior) continue;
            worst = std::max(worst, std::abs(d[c] - df(g.cell_center(c))));
        }
        return worst;
    });
}

RefineTable refine_point_value(const std::string& f_expr, const std::vector<double>& point, const Grid& base,
                               int levels) {
    const Expression f = Expression::parse(f_expr);
    return refine_chain("point-value", base, levels,
                        [&](const Grid& g) { return eval_at_point(project_expr(f, g), point); });
}

RefineTable refine_max_u(const std::string& u0_expr, const std::string& flux, double T, const Grid& base, int levels,
                         int support_margin) {
    const Expression u0 = Expression::parse(u0_expr);
    const FluxModel model = parse_flux(flux, base.dim());
    return refine_chain("max-u", base, levels, [&](const Grid& g) {
        SolverConfig cfg;
        cfg.T = T;
        cfg.snap_every = std::numeric_limits<std::size_t>::max();
        cfg.support_margin = support_margin;
        const SolutionTrace tr = solve(project_expr(u0, g), model, cfg);
        const auto c = tr.snapshots.back().coeffs();
        double m = 0.0;
        for (double v : c) m = std::max(m, std::abs(v));
        return m;
    });
}

}  // namespace uf
