// Acceptance checks. One PASS/FAIL line per criterion.
//   acceptance                 run everything
//   acceptance --criterion 6   run one

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "uf/calculus.hpp"
#include "uf/conservation.hpp"
#include "uf/error.hpp"
#include "uf/lebesgue.hpp"
#include "uf/oracle.hpp"
#include "uf/refine.hpp"
#include "uf/ultraspace.hpp"

using uf::Grid;
using uf::Region;
using uf::Ultrafunction;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng); }
    bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
};

Ultrafunction random_function(const Grid& g, Rng& rng) {
    Ultrafunction u(g);
    for (std::size_t c = 0; c < g.cell_count(); ++c) u[c] = rng.uniform(-1.0, 1.0);
    return u;
}

uf::VectorUltrafunction random_field(const Grid& g, Rng& rng) {
    std::vector<Ultrafunction> comps;
    for (int a = 0; a < g.dim(); ++a) comps.push_back(random_function(g, rng));
    return uf::VectorUltrafunction(std::move(comps));
}

Region random_region(const Grid& g, Rng& rng) {
    std::vector<std::size_t> ids;
    for (std::size_t c = 0; c < g.cell_count(); ++c)
        if (rng.coin()) ids.push_back(c);
    if (ids.empty()) ids.push_back(rng.index(g.cell_count()));
    return Region::from_ids(g, ids);
}

Region random_box(const Grid& g, Rng& rng) {
    uf::CellIndex lo(g.dim()), hi(g.dim());
    for (int a = 0; a < g.dim(); ++a) {
        const auto n = static_cast<std::int64_t>(g.extent(a));
        lo[a] = static_cast<std::int64_t>(rng.index(static_cast<std::size_t>(n)));
        hi[a] = lo[a] + 1 + static_cast<std::int64_t>(rng.index(static_cast<std::size_t>(n - lo[a])));
    }
    return Region::box(g, lo, hi);
}

Grid cube(int dim, std::size_t n, double h) {
    return Grid(std::vector<std::size_t>(dim, n), std::vector<double>(dim, -0.5 * h * static_cast<double>(n)), h);
}

// ---- 1 -------------------------------------------------------------------

Outcome antisymmetry() {
    const auto t0 = Clock::now();
    Rng rng(1001);
    double worst = 0.0;
    for (const Grid& g : {cube(1, 16, 1.0 / 16), cube(2, 8, 1.0 / 8), cube(3, 4, 0.25)}) {
        const auto ops = uf::operators_for(g);
        for (int pair = 0; pair < 50; ++pair) {
            const Ultrafunction u = random_function(g, rng), v = random_function(g, rng);
            const double bound = uf::norm(u) * uf::norm(v) / g.h();
            for (int j = 0; j < g.dim(); ++j) {
                const double s =
                    uf::inner_product(ops->d(j).apply(u), v) + uf::inner_product(u, ops->d(j).apply(v));
                worst = std::max(worst, std::abs(s) / bound);
            }
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-13 && secs < 1.0,
            fmt("max |(Du,v)+(u,Dv)| h/(|u||v|) = %.3g (tol 1e-13), %.3f s (limit 1 s)", worst, secs)};
}

// ---- 2, 3 ----------------------------------------------------------------

struct GaussStats {
    double lemma = 0.0, pointwise = 0.0, tv = 0.0;
    double seconds = 0.0;
};

GaussStats gauss_random(bool rectangles) {
    const auto t0 = Clock::now();
    Rng rng(rectangles ? 2002 : 2001);
    GaussStats s;
    for (const Grid& g : {cube(2, 6, 1.0 / 6), cube(3, 4, 0.25)}) {
        for (int k = 0; k < 30; ++k) {
            const auto phi = random_field(g, rng);
            const Region om = rectangles ? random_box(g, rng) : random_region(g, rng);
            const auto r = uf::gauss_check(phi, om);
            s.lemma = std::max(s.lemma, r.lemma_residual / r.scale);
            s.pointwise = std::max(s.pointwise, r.pointwise_residual / r.scale);
            s.tv = std::max(s.tv, r.tv_residual / r.scale);
        }
    }
    s.seconds = seconds_since(t0);
    return s;
}

Outcome lemma() {
    const GaussStats s = gauss_random(false);
    return {s.lemma <= 1e-12 && s.seconds < 1.0,
            fmt("max |lhs - mid|/scale = %.3g (tol 1e-12), %.3f s (limit 1 s)", s.lemma, s.seconds)};
}

Outcome gauss_pointwise() {
    const GaussStats s = gauss_random(false);
    const GaussStats b = gauss_random(true);
    const double worst = std::max(s.pointwise, b.pointwise);
    return {worst <= 1e-12, fmt("max |lhs - rhs_pointwise|/scale = %.3g (tol 1e-12); tv variant on random regions %.3g",
                                worst, s.tv)};
}

Outcome gauss_tv_rectangles() {
    const GaussStats b = gauss_random(true);
    return {b.tv <= 1e-12, fmt("max |lhs - rhs_tv|/scale on rectangles = %.3g (tol 1e-12)", b.tv)};
}

// ---- 4 -------------------------------------------------------------------

Outcome characteristic() {
    // omega = {x < 0} on [-1, 1]^2
    const Grid g({4, 4}, {-1.0, -1.0}, 0.5);
    const Region om = Region::from_centers(g, [](std::span<const double> x) { return x[0] < 0.0; });
    const Ultrafunction chi = Ultrafunction::indicator(om);
    const uf::RegularizedFunction reg = uf::regularized_characteristic(om);
    const uf::EtaRadius eta(0.1);

    int bad = 0, total = 0;
    std::string first;
    auto expect = [&](double got, double want) {
        ++total;
        if (got == want) return;
        if (bad++ == 0) first = fmt(" (item %d: got %.17g, want %g)", total, got, want);
    };
    for (double y : {-0.9, -0.5, -0.2, 0.0, 0.35, 0.75}) {
        const std::vector<double> in{-0.4, y}, out{0.6, y}, face{0.0, y};
        expect(uf::eval_at_point(chi, in), 1.0);
        expect(uf::eval_at_point(chi, out), 0.0);
        expect(uf::eval_at_point(chi, face), 0.5);
        expect(uf::lebesgue_average(chi, in, eta), 1.0);
        expect(uf::lebesgue_average(chi, out, eta), 0.0);
        expect(uf::lebesgue_average(chi, face, eta), 0.5);
    }
    for (std::int64_t j = 0; j < 4; ++j) {
        expect(reg.face_value(g.face_id(0, {2, j})), 0.5);
        expect(reg.face_value(g.face_id(0, {1, j})), 1.0);
        expect(reg.face_value(g.face_id(0, {3, j})), 0.0);
    }
    return {bad == 0, fmt("%d of %d point/face values differ from 1/0/0.5%s", bad, total, first.c_str())};
}

// ---- 5 -------------------------------------------------------------------

uf::RadonMeasureSpec random_measure(const Grid& g, Rng& rng) {
    uf::RadonMeasureSpec mu;
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), c = rng.uniform(0.5, 3);
    switch (rng.index(3)) {
        case 0: mu.density = [a, b](std::span<const double> x) { return a + b * x[0] * x[x.size() - 1]; }; break;
        case 1: mu.density = [a, c](std::span<const double> x) { return a * std::sin(c * x[0]) + std::cos(x[x.size() - 1]); }; break;
        default: break;
    }
    const std::size_t faces = rng.index(5);
    for (std::size_t k = 0; k < faces; ++k) {
        const int axis = static_cast<int>(rng.index(static_cast<std::size_t>(g.dim())));
        mu.surface.emplace_back(uf::FaceId{axis, rng.index(g.face_count(axis))}, rng.uniform(-2, 2));
    }
    const std::size_t atoms = rng.index(5);
    for (std::size_t k = 0; k < atoms; ++k) {
        std::vector<double> p(g.dim());
        for (int ax = 0; ax < g.dim(); ++ax) {
            p[ax] = rng.uniform(g.lower(ax), g.upper(ax));
            // sometimes snap onto a face plane
            if (rng.coin(0.3))
                p[ax] = g.lower(ax) + g.h() * static_cast<double>(rng.index(g.extent(ax) + 1));
        }
        mu.atoms.push_back({p, rng.uniform(-2, 2)});
    }
    return mu;
}

Outcome projection() {
    Rng rng(5005);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const int dim = 1 + static_cast<int>(rng.index(2));
        std::vector<std::size_t> ext(dim);
        std::vector<double> org(dim);
        for (int a = 0; a < dim; ++a) {
            ext[a] = 1 + rng.index(4);
            org[a] = rng.uniform(-1, 1);
        }
        const Grid g(ext, org, rng.uniform(0.25, 1.0));
        const auto mu = random_measure(g, rng);
        const auto rep = uf::oracle::compare(uf::project_measure(mu, g).function, uf::oracle::dense_project_measure(mu, g), 1e-12);
        worst = std::max(worst, std::isfinite(rep.max_abs) ? rep.max_abs : INFINITY);
    }
    return {worst <= 1e-12, fmt("max |fast - dense| over 100 measures = %.3g (tol 1e-12)", worst)};
}

// ---- 6, 7 ----------------------------------------------------------------

Ultrafunction radial_bump(const Grid& g, double radius) {
    return uf::project_function(
               [radius](std::span<const double> x) {
                   double r2 = 0.0;
                   for (double xi : x) r2 += xi * xi;
                   const double s = std::sqrt(r2) / radius;
                   return s < 1.0 ? std::pow(std::cos(0.5 * std::numbers::pi * s), 2) : 0.0;
               },
               g)
        .function;
}

// |u| below this does not count as support (absolute; the bumps have height 1).
constexpr double kSupportThreshold = 1e-10;

struct BurgersRun {
    uf::SolutionTrace trace;
    double t_limit = 0.0;
    double seconds = 0.0;
};

// Time at which the support of the Burgers solution reaches the margin band
// (or the state stops being finite), capped at t_cap.
double margin_limited_time(const Ultrafunction& u0, const uf::SolverConfig& base, double t_cap) {
    uf::SolverConfig probe = base;
    probe.T = t_cap;
    probe.snap_every = 1000000;
    try {
        uf::solve(u0, uf::FluxModel::burgers(u0.grid().dim()), probe);
    } catch (const uf::MarginViolation& e) {
        return e.time;
    } catch (const uf::NonFiniteState& e) {
        return e.time;
    }
    return t_cap;
}

const BurgersRun& burgers_run(int dim) {
    static std::map<int, BurgersRun> cache;
    if (auto it = cache.find(dim); it != cache.end()) return it->second;
    const auto t0 = Clock::now();
    const Grid g = dim == 1 ? cube(1, 256, 2.0 / 256) : cube(2, 64, 2.0 / 64);
    const Ultrafunction u0 = radial_bump(g, 0.4);
    uf::SolverConfig cfg;
    cfg.support_threshold = kSupportThreshold;
    const double t_limit = margin_limited_time(u0, cfg, 4.0);
    cfg.T = 0.5 * t_limit;
    cfg.snap_every = dim == 1 ? 25 : 10;
    BurgersRun run{uf::solve(u0, uf::FluxModel::burgers(dim), cfg), t_limit, 0.0};
    run.seconds = seconds_since(t0);
    return cache.emplace(dim, std::move(run)).first->second;
}

Outcome mass_conservation() {
    std::string detail;
    bool pass = true;
    for (int dim : {1, 2}) {
        const BurgersRun& run = burgers_run(dim);
        const double q0 = run.trace.step_mass.front();
        double drift = 0.0;
        for (double q : run.trace.step_mass) drift = std::max(drift, std::abs(q - q0));
        const double rel = drift / std::abs(q0);
        const double tol = dim == 1 ? 1e-10 : 1e-9;
        pass = pass && rel <= tol && run.seconds < 10.0;
        detail += fmt("%dD: T=%.4g (limit %.4g), %zu steps, max|Q-Q0|/|Q0| = %.3g (tol %.0e), %.2f s; ", dim,
                      run.trace.times.back(), run.t_limit, run.trace.step_times.size() - 1, rel, tol, run.seconds);
    }
    detail.resize(detail.size() - 2);
    return {pass, detail};
}

Outcome region_balance() {
    Rng rng(7007);
    double worst = 0.0;
    std::size_t rows = 0;
    for (int dim : {1, 2}) {
        const BurgersRun& run = burgers_run(dim);
        const uf::FluxModel f = uf::FluxModel::burgers(dim);
        for (int k = 0; k < 5; ++k) {
            const Region om = random_region(run.trace.grid, rng);
            for (const auto& row : uf::conservation_report(run.trace, om, f)) {
                worst = std::max(worst, row.scale > 0.0 ? row.residual / row.scale : row.residual);
                ++rows;
            }
        }
    }
    return {worst <= 1e-12, fmt("max |rate - surface|/scale over %zu snapshot rows = %.3g (tol 1e-12)", rows, worst)};
}

// ---- 8 -------------------------------------------------------------------

Outcome consistency() {
    std::vector<double> errs;
    for (int n : {16, 32, 64}) {
        const Grid g({static_cast<std::size_t>(n)}, {0.0}, 1.0 / n);
        const Ultrafunction f =
            uf::project_function([](std::span<const double> x) { return std::sin(x[0]); }, g).function;
        const Ultrafunction df = uf::operators_for(g)->d(0).apply(f);
        double e = 0.0;
        for (int c = 1; c + 1 < n; ++c) e = std::max(e, std::abs(df[c] - std::cos(g.center(c, 0))));
        errs.push_back(e);
    }
    const double s1 = std::log2(errs[0] / errs[1]), s2 = std::log2(errs[1] / errs[2]);
    const bool pass = std::abs(s1 - 2.0) <= 0.1 && std::abs(s2 - 2.0) <= 0.1;
    return {pass, fmt("errors %.3g %.3g %.3g, slopes %.4f %.4f (want 2 +- 0.1)", errs[0], errs[1], errs[2], s1, s2)};
}

// ---- 9 -------------------------------------------------------------------

Outcome singular_peak() {
    const auto inv_r = [](std::span<const double> x) { return 1.0 / std::hypot(x[0], x[1]); };
    std::vector<double> peak;
    for (const auto& [n, h] : {std::pair<std::size_t, double>{11, 0.1}, {21, 0.05}, {41, 0.025}, {81, 0.0125}}) {
        const Grid g = cube(2, n, h);
        const auto p = uf::project_function(inv_r, g);
        const std::int64_t mid = static_cast<std::int64_t>(n / 2);
        peak.push_back(p.function[g.flatten({mid, mid})]);
    }
    bool pass = true;
    std::string ratios;
    for (std::size_t k = 1; k < peak.size(); ++k) {
        const double r = peak[k] / peak[k - 1];
        pass = pass && std::isfinite(peak[k]) && std::abs(r - 2.0) <= 0.2;
        ratios += fmt(" %.6f", r);
    }
    return {pass, fmt("origin-cell values %.6g .. %.6g, ratios%s (want 2 +- 0.2)", peak.front(), peak.back(), ratios.c_str())};
}

// ---- 10 ------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "uf_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream(dir / "grid.json") << R"({"extent":[48,48],"origin":[-1,-1],"h":0.041666666666666664})";
    }
    // 8 max(0, 1/4 - r^2)^2: a C1 bump of height 1/2
    const std::string bump = "2*(0.25 - r*r + abs(0.25 - r*r))^2";
    std::vector<std::string> csv;
    for (int threads : {1, 8}) {
        const fs::path out = dir / ("t" + std::to_string(threads));
        const std::string cmd = "UF_THREADS=" + std::to_string(threads) + " \"" + UF_CLI_PATH +
                                "\" solve --flux burgers --u0-expr \"" + bump + "\" --grid \"" +
                                (dir / "grid.json").string() + "\" --T 0.3 --snap-every 5 --threshold 1e-10 --out \"" +
                                out.string() + "\" > /dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        if (rc != 0) return {false, fmt("uf solve exited with status %d (UF_THREADS=%d)", rc, threads)};
        csv.push_back(slurp(out / "conservation.csv"));
    }
    const bool same = !csv[0].empty() && csv[0] == csv[1];
    fs::remove_all(dir);
    return {same, fmt("conservation.csv %s between UF_THREADS=1 and UF_THREADS=8 (%zu bytes)",
                      same ? "identical" : "differs", csv[0].size())};
}

struct Criterion {
    std::string id;
    std::string title;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list{
        {"1", "derivative antisymmetry", antisymmetry},
        {"2", "divergence lemma exactness", lemma},
        {"3a", "Gauss identity, pointwise pairing", gauss_pointwise},
        {"3b", "Gauss identity, TV pairing on rectangles", gauss_tv_rectangles},
        {"4", "regularized characteristic values", characteristic},
        {"5", "project_measure vs dense oracle", projection},
        {"6", "Burgers total mass conservation", mass_conservation},
        {"7", "semidiscrete region balance", region_balance},
        {"8", "centred derivative consistency order", consistency},
        {"9", "1/|x| origin-cell growth", singular_peak},
        {"10", "thread-count determinism of solve", determinism},
    };
    return list;
}

}  // namespace

int main(int argc, char** argv) {
    std::string only;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) {
            only = argv[++i];
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion ID]\n");
            return 2;
        }
    }
    int failures = 0, ran = 0;
    for (const auto& c : criteria()) {
        if (!only.empty() && c.id != only) continue;
        ++ran;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %s (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    if (ran == 0) {
        std::fprintf(stderr, "unknown criterion %s\n", only.c_str());
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
