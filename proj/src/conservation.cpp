#include "uf/conservation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "uf/error.hpp"
#include "uf/expr.hpp"
#include "uf/summation.hpp"

namespace uf {

FluxModel FluxModel::burgers(int dim, double u_bound) {
    if (dim < 1) throw InvalidArgument("flux dimension must be positive");
    FluxModel m;
    m.components.assign(dim, [](double, std::span<const double>, double u) { return 0.5 * u * u; });
    m.zero_at_zero = true;
    // |F| = sqrt(N) u^2 / 2 <= sqrt(N) u_bound / 2 * |u| for |u| <= u_bound
    m.c1 = 0.0;
    m.c2 = 0.5 * std::sqrt(static_cast<double>(dim)) * u_bound;
    m.description = "burgers";
    return m;
}

FluxModel FluxModel::advection(std::vector<double> velocity) {
    if (velocity.empty()) throw InvalidArgument("advection needs a velocity");
    FluxModel m;
    double speed2 = 0.0;
    std::ostringstream desc;
    desc << "advection:";
    for (std::size_t j = 0; j < velocity.size(); ++j) {
        const double a = velocity[j];
        if (!std::isfinite(a)) throw InvalidArgument("advection velocity must be finite");
        m.components.push_back([a](double, std::span<const double>, double u) { return a * u; });
        speed2 += a * a;
        desc << (j ? "," : "") << a;
    }
    m.zero_at_zero = true;
    m.c1 = 0.0;
    m.c2 = std::sqrt(speed2);
    m.description = desc.str();
    return m;
}

FluxModel FluxModel::from_expressions(const std::vector<std::string>& exprs, double c1, double c2) {
    if (exprs.empty()) throw InvalidArgument("custom flux needs at least one expression");
    FluxModel m;
    std::string desc = "custom:";
    for (std::size_t j = 0; j < exprs.size(); ++j) {
        const Expression e = Expression::parse(exprs[j]);
        m.components.push_back([e](double t, std::span<const double> x, double u) {
            Variables v;
            v.t = t;
            v.u = u;
            double r2 = 0.0;
            if (!x.empty()) v.x = x[0];
            if (x.size() > 1) v.y = x[1];
            if (x.size() > 2) v.z = x[2];
            for (double xi : x) r2 += xi * xi;
            v.r = std::sqrt(r2);
            return e.eval(v);
        });
        desc += (j ? ";" : "") + exprs[j];
    }
    m.c1 = c1;
    m.c2 = c2;
    m.description = desc;
    return m;
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t p = s.find(sep, start);
        out.emplace_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("bad number in flux spec: '" + s + "'");
    }
    if (used != s.size()) throw InvalidArgument("bad number in flux spec: '" + s + "'");
    return v;
}

}  // namespace

FluxModel parse_flux(std::string_view spec, int dim) {
    if (dim < 1) throw InvalidArgument("flux dimension must be positive");
    if (spec == "burgers") return FluxModel::burgers(dim);
    if (spec.starts_with("advection")) {
        std::vector<double> a;
        if (spec == "advection") {
            a.assign(dim, 1.0);
        } else {
            if (spec[9] != ':') throw InvalidArgument("expected advection:a[,b,..]");
            for (const auto& part : split(spec.substr(10), ',')) a.push_back(parse_number(part));
        }
        if (a.size() == 1) a.assign(dim, a.front());
        if (a.size() != static_cast<std::size_t>(dim))
            throw InvalidArgument("advection needs 1 or " + std::to_string(dim) + " velocities");
        return FluxModel::advection(a);
    }
    std::string_view body = spec.starts_with("custom:") ? spec.substr(7) : spec;
    std::vector<std::string> exprs = split(body, ';');
    if (exprs.size() == 1) exprs.assign(dim, exprs.front());
    if (exprs.size() != static_cast<std::size_t>(dim))
        throw InvalidArgument("custom flux needs 1 or " + std::to_string(dim) + " expressions");
    return FluxModel::from_expressions(exprs);
}

FluxValidation validate_flux(const FluxModel& f, const Grid& grid, double t0, double t1, double u_min,
                             double u_max) {
    FluxValidation v;
    const int n = f.dim();
    const std::size_t cells = grid.cell_count();
    const std::size_t stride = std::max<std::size_t>(1, cells / 64);
    const int nu = 33;
    const double span_u = std::max(u_max - u_min, 0.0);
    const double du0 = std::max(1e-4 * std::max({std::abs(u_min), std::abs(u_max), 1.0}), 1e-8);
    const bool check_growth = f.c1 != 0.0 || f.c2 != 0.0;

    std::vector<double> speed(n, 0.0);
    for (double t : {t0, 0.5 * (t0 + t1), t1}) {
        for (std::size_t c = 0; c < cells; c += stride) {
            const std::vector<double> x = grid.cell_center(c);
            if (f.zero_at_zero) {
                for (int j = 0; j < n; ++j)
                    if (f.components[j](t, x, 0.0) != 0.0) v.zero_at_zero_holds = false;
            }
            for (int k = 0; k < nu; ++k) {
                const double u = u_min + span_u * static_cast<double>(k) / (nu - 1);
                double mag2 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const auto& F = f.components[j];
                    const double val = F(t, x, u);
                    mag2 += val * val;
                    const double d1 = (F(t, x, u + du0) - F(t, x, u - du0)) / (2.0 * du0);
                    const double d2 = (F(t, x, u + 0.5 * du0) - F(t, x, u - 0.5 * du0)) / du0;
                    if (!std::isfinite(val) || !std::isfinite(d1) || !std::isfinite(d2)) {
                        v.differentiable = false;
                        continue;
                    }
                    // a C1 function's difference quotients settle as the step halves
                    if (std::abs(d1 - d2) > 1e-3 * std::max(1.0, std::abs(d2))) v.differentiable = false;
                    speed[j] = std::max(speed[j], std::abs(d2));
                }
                if (check_growth) {
                    const double excess = std::sqrt(mag2) - (f.c1 + f.c2 * std::abs(u));
                    if (excess > 1e-12 * std::max(1.0, std::sqrt(mag2))) {
                        ++v.growth_violations;
                        v.max_growth_excess = std::max(v.max_growth_excess, excess);
                    }
                }
            }
        }
    }
    for (double s : speed) v.max_speed += s;
    return v;
}

namespace {

void check_finite(std::span<const double> values, double t, const char* where) {
    for (double x : values)
        if (!std::isfinite(x)) throw NonFiniteState(t, where);
}

std::vector<std::vector<double>> flux_values(double t, const Ultrafunction& u, const FluxModel& f) {
    const Grid& g = u.grid();
    if (f.dim() != g.dim()) throw InvalidArgument("flux has " + std::to_string(f.dim()) + " components, grid has dimension " +
                                                  std::to_string(g.dim()));
    std::vector<std::vector<double>> phi(g.dim(), std::vector<double>(g.cell_count()));
    for (int j = 0; j < g.dim(); ++j) {
        kernels::flux_eval(f.components[j], t, g, u.coeffs(), phi[j]);
        check_finite(phi[j], t, "flux");
    }
    return phi;
}

// -sum_j D_j phi_j into out
void minus_divergence(const Grid& g, const std::vector<std::vector<double>>& phi, std::span<double> out) {
    const auto ops = operators_for(g);
    std::vector<double> dj(g.cell_count());
    std::fill(out.begin(), out.end(), 0.0);
    for (int j = 0; j < g.dim(); ++j) {
        kernels::csr_apply(ops->d(j).matrix(), phi[j], dj);
        kernels::axpy(-1.0, dj, out, out);
    }
}

}  // namespace

VectorUltrafunction cellwise_flux(double t, const Ultrafunction& u, const FluxModel& f) {
    auto phi = flux_values(t, u, f);
    std::vector<Ultrafunction> comps;
    for (auto& p : phi) comps.emplace_back(u.grid(), std::move(p));
    return VectorUltrafunction(std::move(comps));
}

Ultrafunction semidiscrete_rhs(double t, const Ultrafunction& u, const FluxModel& f) {
    const auto phi = flux_values(t, u, f);
    Ultrafunction out(u.grid());
    minus_divergence(u.grid(), phi, out.coeffs());
    return out;
}

namespace {

void rhs_into(double t, const Grid& g, std::span<const double> u, const FluxModel& f, std::span<double> out) {
    std::vector<std::vector<double>> phi(g.dim(), std::vector<double>(g.cell_count()));
    for (int j = 0; j < g.dim(); ++j) {
        kernels::flux_eval(f.components[j], t, g, u, phi[j]);
        check_finite(phi[j], t, "flux");
    }
    minus_divergence(g, phi, out);
}

}  // namespace

Ultrafunction step_rk4(double t, const Ultrafunction& u, double dt, const FluxModel& f) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive and finite");
    if (f.dim() != u.grid().dim()) throw InvalidArgument("flux dimension does not match grid");
    const Grid& g = u.grid();
    const std::size_t n = g.cell_count();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n), next(n);
    rhs_into(t, g, u.coeffs(), f, k1);
    kernels::axpy(0.5 * dt, k1, u.coeffs(), tmp);
    rhs_into(t + 0.5 * dt, g, tmp, f, k2);
    kernels::axpy(0.5 * dt, k2, u.coeffs(), tmp);
    rhs_into(t + 0.5 * dt, g, tmp, f, k3);
    kernels::axpy(dt, k3, u.coeffs(), tmp);
    rhs_into(t + dt, g, tmp, f, k4);
    kernels::rk4_combine(u.coeffs(), k1, k2, k3, k4, dt, next);
    check_finite(next, t + dt, "state");
    return Ultrafunction(g, std::move(next));
}

double total_mass(const Ultrafunction& u) { return u.grid().cell_volume() * pairwise_sum(u.coeffs()); }

namespace {

std::pair<double, double> value_range(const Ultrafunction& u) {
    const auto c = u.coeffs();
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    return {std::min(*lo, 0.0), std::max(*hi, 0.0)};
}

}  // namespace

double default_dt(const Ultrafunction& u0, const FluxModel& f, double cfl) {
    const auto [lo, hi] = value_range(u0);
    const FluxValidation v = validate_flux(f, u0.grid(), 0.0, 0.0, lo, hi);
    const double speed = v.max_speed;
    if (!(speed > 0.0)) return cfl * u0.grid().h();
    return cfl * u0.grid().h() / speed;
}

namespace {

// First cell inside the margin band whose value counts as support, or kExterior.
std::size_t margin_breach(const Ultrafunction& u, int margin, double threshold) {
    const Grid& g = u.grid();
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        if (!(std::abs(u[c]) > threshold)) continue;
        for (int a = 0; a < g.dim(); ++a) {
            const auto k = g.coord(c, a);
            if (k < margin || k >= static_cast<std::int64_t>(g.extent(a)) - margin) return c;
        }
    }
    return kExterior;
}

}  // namespace

SolutionTrace solve(const Ultrafunction& u0, const FluxModel& f, const SolverConfig& config) {
    if (!(config.T >= 0.0) || !std::isfinite(config.T)) throw InvalidArgument("T must be finite and >= 0");
    if (config.dt < 0.0 || !std::isfinite(config.dt)) throw InvalidArgument("dt must be positive");
    if (config.support_margin < 1) throw InvalidArgument("support margin must be at least 1");
    if (config.snap_every < 1) throw InvalidArgument("snap_every must be at least 1");
    if (f.dim() != u0.grid().dim()) throw InvalidArgument("flux dimension does not match grid");

    const double dt = config.dt > 0.0 ? config.dt : default_dt(u0, f, config.cfl);
    SolutionTrace trace{u0.grid(), dt, {}, {}, {}, {}, {}};

    if (const std::size_t c = margin_breach(u0, config.support_margin, config.support_threshold); c != kExterior)
        throw MarginViolation(0.0, c);

    std::size_t steps = 0;
    if (config.T > 0.0) steps = static_cast<std::size_t>(std::ceil(config.T / dt - 1e-9));
    if (config.T > 0.0 && steps == 0) steps = 1;

    auto [lo, hi] = value_range(u0);
    Ultrafunction u = u0;
    trace.times.push_back(0.0);
    trace.snapshots.push_back(u);
    trace.step_times.push_back(0.0);
    trace.step_mass.push_back(total_mass(u));

    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double t_next = k + 1 == steps ? config.T : static_cast<double>(k + 1) * dt;
        u = step_rk4(t, u, t_next - t, f);
        if (const std::size_t c = margin_breach(u, config.support_margin, config.support_threshold); c != kExterior)
            throw MarginViolation(t_next, c);
        const auto [a, b] = value_range(u);
        lo = std::min(lo, a);
        hi = std::max(hi, b);
        trace.step_times.push_back(t_next);
        trace.step_mass.push_back(total_mass(u));
        if ((k + 1) % config.snap_every == 0 || k + 1 == steps) {
            trace.times.push_back(t_next);
            trace.snapshots.push_back(u);
        }
    }
    trace.validation = validate_flux(f, u0.grid(), 0.0, config.T, lo, hi);
    return trace;
}

std::vector<ConservationRow> conservation_report(const SolutionTrace& trace, const Region& omega, const FluxModel& f) {
    require_same_grid(trace.grid, omega.grid());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<ConservationRow> rows;
    for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
        const double t = trace.times[k];
        const Ultrafunction& u = trace.snapshots[k];
        const VectorUltrafunction phi = cellwise_flux(t, u, f);
        ConservationRow r;
        r.t = t;
        r.mass = region_integral(u, omega);
        r.rate = -region_integral(divergence(phi), omega);
        r.surface = -pointwise_surface_pairing(phi, omega);
        r.residual = std::abs(r.rate - r.surface);
        r.scale = flux_scale(phi);
        r.fd_rate = nan;
        r.fd_residual = nan;
        rows.push_back(r);
    }
    for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
        rows[k].fd_rate = (rows[k + 1].mass - rows[k - 1].mass) / (rows[k + 1].t - rows[k - 1].t);
        rows[k].fd_residual = std::abs(rows[k].fd_rate - rows[k].rate);
    }
    return rows;
}

}  // namespace uf
