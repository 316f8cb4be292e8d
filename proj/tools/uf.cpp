// Command-line front end: uf <command> [options]. See --help.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "uf/calculus.hpp"
#include "uf/conservation.hpp"
#include "uf/error.hpp"
#include "uf/expr.hpp"
#include "uf/io.hpp"
#include "uf/lebesgue.hpp"
#include "uf/parallel.hpp"
#include "uf/refine.hpp"
#include "uf/verify.hpp"

namespace fs = std::filesystem;
using uf::io::Json;

namespace {

constexpr int kExitMargin = 3;
constexpr int kExitNonFinite = 4;

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) {
        std::size_t used = 0;
        try {
            out.push_back(std::stod(part, &used));
        } catch (const std::exception&) {
            used = std::string::npos;
        }
        if (used != part.size()) throw uf::InvalidArgument("bad number '" + part + "' in '" + s + "'");
    }
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, sep)) out.push_back(part);
    return out;
}

struct Run {
    uf::io::RunManifest manifest;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    fs::path dir;

    Run(std::string command, const std::string& out) : dir(out) {
        manifest.command = std::move(command);
        manifest.output_dir = out;
        fs::create_directories(dir);
    }
    void input(const std::string& path) {
        if (!path.empty()) manifest.inputs.push_back(path);
    }
    void param(const std::string& k, const std::string& v) { manifest.params[k] = v; }
    void write(const std::string& name, const std::string& content) const { uf::io::write_atomic(dir / name, content); }
    void finish() {
        manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        uf::io::write_manifest(dir, manifest);
    }
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json report_json(const uf::GaussReport& r) {
    Json j;
    j["lhs"] = r.lhs;
    j["mid"] = r.mid;
    j["rhs_tv"] = r.rhs_tv;
    j["rhs_pointwise"] = r.rhs_pointwise;
    j["scale"] = r.scale;
    j["tolerance"] = r.tolerance;
    j["residuals"] = {{"lemma", r.lemma_residual}, {"pointwise", r.pointwise_residual}, {"tv", r.tv_residual}};
    j["lemma_ok"] = r.lemma_ok;
    j["theorem_ok"] = r.theorem_ok;
    return j;
}

std::string nan_or(double v) { return std::isnan(v) ? "nan" : uf::io::format_double(v); }

// ---- project ---------------------------------------------------------------

struct ProjectArgs {
    std::string grid, expr, measure, out = ".", name = "u";
};

int cmd_project(const ProjectArgs& a) {
    if (a.expr.empty() == a.measure.empty()) throw uf::InvalidArgument("give exactly one of --expr or --measure");
    Json measure;
    if (!a.measure.empty()) measure = uf::io::read_json(a.measure);
    std::optional<uf::Grid> grid;
    if (!a.grid.empty())
        grid = uf::io::grid_from_json(uf::io::read_json(a.grid));
    else if (measure.contains("grid"))
        grid = uf::io::grid_from_json(measure.at("grid"));
    else
        throw uf::InvalidArgument("--grid is required");

    Run run("project", a.out);
    run.input(a.grid);
    run.input(a.measure);
    run.param("expr", a.expr);
    uf::Projection p = a.expr.empty()
                           ? uf::project_measure(uf::io::measure_from_json(measure, *grid), *grid)
                           : uf::project_function(uf::to_point_function(uf::Expression::parse(a.expr)), *grid);
    std::size_t nonfinite = 0;
    for (const auto& d : p.unconverged) {
        if (!d.finite) ++nonfinite;
    }
    if (nonfinite > 0)
        throw uf::QuadratureError(std::to_string(nonfinite) + " cells saw non-finite samples (first: cell " +
                                  std::to_string(p.unconverged.front().cell) + ")");
    if (!p.unconverged.empty())
        std::cerr << "warning: quadrature did not reach tolerance in " << p.unconverged.size() << " cells\n";
    run.write(a.name + ".json", dump(uf::io::to_json(p.function)));
    run.write(a.name + ".csv", uf::io::to_csv(p.function));
    run.finish();
    double peak = 0.0;
    for (double v : p.function.coeffs()) peak = std::max(peak, std::abs(v));
    std::cout << "projected " << p.function.size() << " cells, max |coeff| " << uf::io::format_double(peak) << "\n";
    return 0;
}

// ---- derive ----------------------------------------------------------------

struct DeriveArgs {
    std::string u, out = ".", name = "du";
    int axis = -1;
};

int cmd_derive(const DeriveArgs& a) {
    const uf::Ultrafunction u = uf::io::ultrafunction_from_json(uf::io::read_json(a.u));
    Run run("derive", a.out);
    run.input(a.u);
    run.param("axis", std::to_string(a.axis));
    if (a.axis < 0) {
        run.write(a.name + ".json", dump(uf::io::to_json(uf::gradient(u))));
    } else {
        if (a.axis >= u.grid().dim()) throw uf::InvalidArgument("axis out of range");
        const uf::Ultrafunction d = uf::operators_for(u.grid())->d(a.axis).apply(u);
        run.write(a.name + ".json", dump(uf::io::to_json(d)));
        run.write(a.name + ".csv", uf::io::to_csv(d));
    }
    if (uf::support_touches_box(u)) std::cerr << "warning: support of u touches the grid box boundary\n";
    run.finish();
    return 0;
}

// ---- gauss-check -----------------------------------------------------------

struct GaussArgs {
    std::string phi, region, out;
    double tol = 1e-12;
};

int cmd_gauss(const GaussArgs& a) {
    const uf::VectorUltrafunction phi = uf::io::vector_from_json(uf::io::read_json(a.phi));
    const uf::Region omega = uf::io::region_from_json(uf::io::read_json(a.region));
    const Json rep = report_json(uf::gauss_check(phi, omega, a.tol));
    if (!a.out.empty()) {
        Run run("gauss-check", a.out);
        run.input(a.phi);
        run.input(a.region);
        run.param("tol", uf::io::format_double(a.tol));
        run.write("gauss.json", dump(rep));
        run.finish();
    }
    std::cout << dump(rep);
    return rep["theorem_ok"].get<bool>() && rep["lemma_ok"].get<bool>() ? 0 : 1;
}

// ---- lebesgue --------------------------------------------------------------

struct LebesgueArgs {
    std::string region, u, point;
    double eta = 0.0;
};

int cmd_lebesgue(const LebesgueArgs& a) {
    if (a.region.empty() == a.u.empty()) throw uf::InvalidArgument("give exactly one of --region or --u");
    const uf::Ultrafunction f =
        a.region.empty() ? uf::io::ultrafunction_from_json(uf::io::read_json(a.u))
                         : uf::Ultrafunction::indicator(uf::io::region_from_json(uf::io::read_json(a.region)));
    const std::vector<double> x = parse_list(a.point);
    const double eta = a.eta > 0.0 ? a.eta : 0.25 * f.grid().h();
    Json j;
    j["point"] = x;
    j["eta"] = eta;
    j["average"] = uf::lebesgue_average(f, x, uf::EtaRadius(eta));
    j["regularized_value"] = uf::eval_at_point(f, x);
    std::cout << dump(j);
    return 0;
}

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
    std::string flux = "burgers", u0, u0_expr, grid, out = "trace";
    std::vector<std::string> regions;
    double dt = 0.0, T = 1.0, threshold = 0.0;
    std::size_t snap_every = 10;
    int margin = 2;
};

// Default ledger region: the central half of the box along every axis.
uf::Region central_region(const uf::Grid& g) {
    std::vector<std::int64_t> lo(g.dim()), hi(g.dim());
    for (int a = 0; a < g.dim(); ++a) {
        const auto e = static_cast<std::int64_t>(g.extent(a));
        lo[a] = e / 4;
        hi[a] = e - e / 4;
    }
    return uf::Region::box(g, lo, hi);
}

int cmd_solve(const SolveArgs& a) {
    if (a.u0.empty() == a.u0_expr.empty()) throw uf::InvalidArgument("give exactly one of --u0 or --u0-expr");
    uf::Ultrafunction u0 = [&] {
        if (!a.u0.empty()) return uf::io::ultrafunction_from_json(uf::io::read_json(a.u0));
        if (a.grid.empty()) throw uf::InvalidArgument("--u0-expr needs --grid");
        const uf::Grid g = uf::io::grid_from_json(uf::io::read_json(a.grid));
        return uf::project_function(uf::to_point_function(uf::Expression::parse(a.u0_expr)), g).function;
    }();
    const uf::Grid& g = u0.grid();
    const uf::FluxModel flux = uf::parse_flux(a.flux, g.dim());
    std::vector<uf::Region> regions;
    for (const auto& r : a.regions) regions.push_back(uf::io::region_from_json(uf::io::read_json(r)));
    if (regions.empty()) regions.push_back(central_region(g));

    Run run("solve", a.out);
    run.input(a.u0);
    run.input(a.grid);
    for (const auto& r : a.regions) run.input(r);
    run.param("flux", a.flux);
    run.param("u0_expr", a.u0_expr);
    run.param("dt", uf::io::format_double(a.dt));
    run.param("T", uf::io::format_double(a.T));
    run.param("snap_every", std::to_string(a.snap_every));
    run.param("margin", std::to_string(a.margin));
    run.param("threshold", uf::io::format_double(a.threshold));

    uf::SolverConfig cfg;
    cfg.dt = a.dt;
    cfg.T = a.T;
    cfg.snap_every = a.snap_every;
    cfg.support_margin = a.margin;
    cfg.support_threshold = a.threshold;
    const uf::SolutionTrace tr = uf::solve(u0, flux, cfg);

    Json index;
    index["dt"] = tr.dt;
    index["flux"] = flux.description;
    index["times"] = tr.times;
    Json files = Json::array();
    for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "snap_%05zu.json", k);
        run.write(name, dump(uf::io::to_json(tr.snapshots[k])));
        files.push_back(name);
    }
    index["snapshots"] = files;
    index["validation"] = {{"zero_at_zero", tr.validation.zero_at_zero_holds},
                           {"growth_violations", tr.validation.growth_violations},
                           {"max_growth_excess", tr.validation.max_growth_excess},
                           {"max_speed", tr.validation.max_speed},
                           {"differentiable", tr.validation.differentiable}};
    run.write("trace.json", dump(index));

    std::string mass = "t,Q,dQ\n";
    for (std::size_t k = 0; k < tr.step_times.size(); ++k)
        mass += uf::io::format_double(tr.step_times[k]) + "," + uf::io::format_double(tr.step_mass[k]) + "," +
                uf::io::format_double(tr.step_mass[k] - tr.step_mass.front()) + "\n";
    run.write("mass.csv", mass);

    // conservation.csv: one row per snapshot, worst relative ledger residual over the regions
    std::vector<std::vector<uf::ConservationRow>> ledgers;
    for (const auto& r : regions) ledgers.push_back(uf::conservation_report(tr, r, flux));
    std::string ledger = "region,t,mass,rate,surface,residual,scale,fd_rate,fd_residual\n";
    for (std::size_t r = 0; r < ledgers.size(); ++r)
        for (const auto& row : ledgers[r])
            ledger += std::to_string(r) + "," + uf::io::format_double(row.t) + "," + uf::io::format_double(row.mass) + "," +
                      uf::io::format_double(row.rate) + "," + uf::io::format_double(row.surface) + "," +
                      uf::io::format_double(row.residual) + "," + uf::io::format_double(row.scale) + "," +
                      nan_or(row.fd_rate) + "," + nan_or(row.fd_residual) + "\n";
    run.write("ledger.csv", ledger);

    std::string cons = "t,Q,dQ,region_flux_residual\n";
    const double q0 = uf::total_mass(tr.snapshots.front());
    for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
        double worst = 0.0;
        for (const auto& l : ledgers) worst = std::max(worst, l[k].scale > 0.0 ? l[k].residual / l[k].scale : l[k].residual);
        const double q = uf::total_mass(tr.snapshots[k]);
        cons += uf::io::format_double(tr.times[k]) + "," + uf::io::format_double(q) + "," +
                uf::io::format_double(q - q0) + "," + uf::io::format_double(worst) + "\n";
    }
    run.write("conservation.csv", cons);
    run.finish();

    if (tr.validation.growth_violations > 0)
        std::cerr << "warning: growth bound violated at " << tr.validation.growth_violations << " samples\n";
    double drift = 0.0;
    for (double q : tr.step_mass) drift = std::max(drift, std::abs(q - tr.step_mass.front()));
    std::cout << tr.step_times.size() - 1 << " steps of dt=" << uf::io::format_double(tr.dt)
              << ", max |Q(t)-Q(0)| = " << uf::io::format_double(drift) << "\n";
    return 0;
}

// ---- refine ----------------------------------------------------------------

struct RefineArgs {
    std::string functional, grid, expr, df, phi, box, ball, point, flux = "burgers", out;
    int levels = 3, axis = 0, margin = 1;
    double T = 0.1;
};

std::function<bool(std::span<const double>)> region_predicate(const RefineArgs& a) {
    if (!a.box.empty()) {
        const auto parts = split(a.box, ':');
        if (parts.size() != 2) throw uf::InvalidArgument("--box expects lo1,lo2:hi1,hi2");
        const auto lo = parse_list(parts[0]), hi = parse_list(parts[1]);
        return [lo, hi](std::span<const double> x) {
            for (std::size_t k = 0; k < x.size(); ++k)
                if (x[k] < lo.at(k) || x[k] > hi.at(k)) return false;
            return true;
        };
    }
    if (!a.ball.empty()) {
        const auto parts = split(a.ball, ':');
        if (parts.size() != 2) throw uf::InvalidArgument("--ball expects c1,c2:r");
        const auto c = parse_list(parts[0]);
        const double r = parse_list(parts[1]).at(0);
        return [c, r](std::span<const double> x) {
            double s = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - c.at(k)) * (x[k] - c.at(k));
            return s < r * r;
        };
    }
    throw uf::InvalidArgument("give --box or --ball");
}

int cmd_refine(const RefineArgs& a) {
    const uf::Grid base = uf::io::grid_from_json(uf::io::read_json(a.grid));
    uf::RefineTable t;
    if (a.functional == "region-integral")
        t = uf::refine_region_integral(a.expr, region_predicate(a), base, a.levels);
    else if (a.functional == "gauss-residual")
        t = uf::refine_gauss_residual(split(a.phi, ';'), region_predicate(a), base, a.levels);
    else if (a.functional == "derivative-error")
        t = uf::refine_derivative_error(a.expr, a.df, a.axis, base, a.levels, a.margin);
    else if (a.functional == "point-value")
        t = uf::refine_point_value(a.expr, parse_list(a.point), base, a.levels);
    else if (a.functional == "max-u")
        t = uf::refine_max_u(a.expr, a.flux, a.T, base, a.levels);
    else
        throw uf::InvalidArgument("unknown functional '" + a.functional + "'");

    std::string csv = "level,h,value,diff,value_rate,diff_rate\n";
    for (const auto& s : t.stages) {
        csv += std::to_string(s.level) + "," + uf::io::format_double(s.h) + "," + uf::io::format_double(s.value) + "," +
               nan_or(s.diff) + "," + nan_or(s.value_rate) + "," + nan_or(s.diff_rate) + "\n";
    }
    std::cout << csv;
    if (!a.out.empty()) {
        Run run("refine", a.out);
        run.input(a.grid);
        run.param("functional", a.functional);
        run.param("levels", std::to_string(a.levels));
        run.param("expr", a.expr);
        run.write("refine.csv", csv);
        run.finish();
    }
    return 0;
}

// ---- verify ----------------------------------------------------------------

int cmd_verify(const std::string& suite, std::uint64_t seed) {
    bool ok = true;
    for (const auto& c : uf::run_verify(suite, seed)) {
        std::printf("%s %-14s %-36s measured %.3e  tol %.1e\n", c.pass ? "PASS" : "FAIL", c.suite.c_str(),
                    c.name.c_str(), c.measured, c.tolerance);
        ok = ok && c.pass;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-stage ultrafunction calculus on uniform grids"};
    app.require_subcommand(1);
    app.set_version_flag("--version", uf::io::kToolVersion);

    ProjectArgs pa;
    auto* project = app.add_subcommand("project", "project a function or measure onto a grid");
    project->add_option("--grid", pa.grid, "grid JSON");
    project->add_option("--expr", pa.expr, "function of x, y, z, r");
    project->add_option("--measure", pa.measure, "measure JSON (density, surface, atoms)");
    project->add_option("--out", pa.out, "output directory");
    project->add_option("--name", pa.name, "output file stem");

    DeriveArgs da;
    auto* derive = app.add_subcommand("derive", "apply D_j, or the gradient when no axis is given");
    derive->add_option("--u", da.u, "ultrafunction JSON")->required();
    derive->add_option("--axis", da.axis, "axis (default: all)");
    derive->add_option("--out", da.out, "output directory");
    derive->add_option("--name", da.name, "output file stem");

    GaussArgs ga;
    auto* gauss = app.add_subcommand("gauss-check", "divergence identity report");
    gauss->add_option("--phi", ga.phi, "vector ultrafunction JSON")->required();
    gauss->add_option("--region", ga.region, "region JSON")->required();
    gauss->add_option("--tol", ga.tol, "relative tolerance");
    gauss->add_option("--out", ga.out, "also write gauss.json and a manifest here");

    LebesgueArgs la;
    auto* leb = app.add_subcommand("lebesgue", "ball average of a region indicator or ultrafunction");
    leb->add_option("--region", la.region, "region JSON");
    leb->add_option("--u", la.u, "ultrafunction JSON");
    leb->add_option("--point", la.point, "x[,y,z]")->required();
    leb->add_option("--eta", la.eta, "ball radius, < h/2 (default h/4)");

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "integrate u_t + div F(t,x,u) = 0");
    solve->add_option("--flux", sa.flux, "burgers | advection:a[,b] | custom:<expr>[;<expr>]");
    solve->add_option("--u0", sa.u0, "initial ultrafunction JSON");
    solve->add_option("--u0-expr", sa.u0_expr, "initial data expression (with --grid)");
    solve->add_option("--grid", sa.grid, "grid JSON");
    solve->add_option("--dt", sa.dt, "time step (default 0.2 h / max|F'|)");
    solve->add_option("--T", sa.T, "final time");
    solve->add_option("--snap-every", sa.snap_every, "steps between snapshots");
    solve->add_option("--margin", sa.margin, "support margin in cells");
    solve->add_option("--threshold", sa.threshold, "|u| counted as support above this");
    solve->add_option("--region", sa.regions, "region JSON for the flux ledger (repeatable)");
    solve->add_option("--out", sa.out, "trace directory");

    RefineArgs ra;
    auto* refine = app.add_subcommand("refine", "evaluate a functional along h, h/2, h/4, ...");
    refine->add_option("--functional", ra.functional,
                       "region-integral | gauss-residual | derivative-error | point-value | max-u")
        ->required();
    refine->add_option("--grid", ra.grid, "base grid JSON")->required();
    refine->add_option("--levels", ra.levels, "number of stages (>= 2)");
    refine->add_option("--expr", ra.expr, "function, or initial data for max-u");
    refine->add_option("--df", ra.df, "exact derivative for derivative-error");
    refine->add_option("--axis", ra.axis, "derivative axis");
    refine->add_option("--margin", ra.margin, "cells skipped next to the box for derivative-error");
    refine->add_option("--phi", ra.phi, "field components separated by ';'");
    refine->add_option("--box", ra.box, "region lo1,lo2:hi1,hi2");
    refine->add_option("--ball", ra.ball, "region c1,c2:r");
    refine->add_option("--point", ra.point, "x[,y,z] for point-value");
    refine->add_option("--flux", ra.flux, "flux for max-u");
    refine->add_option("--T", ra.T, "final time for max-u");
    refine->add_option("--out", ra.out, "also write refine.csv and a manifest here");

    std::string suite = "all";
    std::uint64_t seed = 1;
    auto* verify = app.add_subcommand("verify", "fast paths against the dense reference implementations");
    verify->add_option("--suite", suite, "all | projection | derivative | antisymmetry | gauss | conservation");
    verify->add_option("--seed", seed, "random seed");

    CLI11_PARSE(app, argc, argv);

    try {
        uf::parallel::configure_from_env();
        if (*project) return cmd_project(pa);
        if (*derive) return cmd_derive(da);
        if (*gauss) return cmd_gauss(ga);
        if (*leb) return cmd_lebesgue(la);
        if (*solve) return cmd_solve(sa);
        if (*refine) return cmd_refine(ra);
        if (*verify) return cmd_verify(suite, seed);
    } catch (const uf::MarginViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMargin;
    } catch (const uf::NonFiniteState& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonFinite;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
