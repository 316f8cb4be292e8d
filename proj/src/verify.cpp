#include "uf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "uf/calculus.hpp"
#include "uf/conservation.hpp"
#include "uf/error.hpp"
#include "uf/oracle.hpp"

namespace uf {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

Ultrafunction random_function(const Grid& g, Rng& rng) {
    Ultrafunction u(g);
    for (std::size_t c = 0; c < u.size(); ++c) u[c] = uniform(rng, -1.0, 1.0);
    return u;
}

Region random_region(const Grid& g, Rng& rng) {
    std::vector<std::size_t> ids;
    for (std::size_t c = 0; c < g.cell_count(); ++c)
        if (uniform(rng, 0.0, 1.0) < 0.5) ids.push_back(c);
    return Region::from_ids(g, ids);
}

std::vector<Grid> small_grids() {
    return {Grid({5}, {0.0}, 0.2), Grid({3, 3}, {0.0, 0.0}, 1.0), Grid({4, 4}, {-1.0, 0.5}, 0.25),
            Grid({2, 3}, {0.0, 0.0}, 0.5), Grid({2, 2, 2}, {0.0, 0.0, 0.0}, 0.5), Grid({3, 3, 3}, {-1.0, -1.0, -1.0}, 0.7)};
}

std::string grid_name(const Grid& g) {
    std::ostringstream s;
    for (int a = 0; a < g.dim(); ++a) s << (a ? "x" : "") << g.extent(a);
    return s.str();
}

// Quadratic with random coefficients: integrated exactly by both quadratures.
PointFunction random_density(Rng& rng, int dim) {
    std::vector<double> lin(dim), quad(dim);
    const double c0 = uniform(rng, -1.0, 1.0);
    for (int a = 0; a < dim; ++a) {
        lin[a] = uniform(rng, -1.0, 1.0);
        quad[a] = uniform(rng, -1.0, 1.0);
    }
    const double cross = uniform(rng, -1.0, 1.0);
    return [=](std::span<const double> x) {
        double v = c0;
        for (std::size_t a = 0; a < x.size(); ++a) v += lin[a] * x[a] + quad[a] * x[a] * x[a];
        if (x.size() > 1) v += cross * x[0] * x[1];
        return v;
    };
}

RadonMeasureSpec random_measure(const Grid& g, Rng& rng) {
    RadonMeasureSpec mu;
    if (uniform(rng, 0.0, 1.0) < 0.7) mu.density = random_density(rng, g.dim());
    const std::size_t nsurf = pick(rng, 4);
    for (std::size_t k = 0; k < nsurf; ++k) {
        const int axis = static_cast<int>(pick(rng, g.dim()));
        mu.surface.emplace_back(FaceId{axis, pick(rng, g.face_count(axis))}, uniform(rng, -2.0, 2.0));
    }
    const std::size_t natoms = pick(rng, 4);
    for (std::size_t k = 0; k < natoms; ++k) {
        Atom a;
        for (int ax = 0; ax < g.dim(); ++ax) a.point.push_back(uniform(rng, g.lower(ax), g.upper(ax)));
        // some atoms sit exactly on a face
        if (uniform(rng, 0.0, 1.0) < 0.3) {
            const int ax = static_cast<int>(pick(rng, g.dim()));
            a.point[ax] = g.lower(ax) + static_cast<double>(pick(rng, g.extent(ax) + 1)) * g.h();
        }
        a.mass = uniform(rng, -2.0, 2.0);
        mu.atoms.push_back(a);
    }
    return mu;
}

VerifyCheck make(const std::string& suite, const std::string& name, double measured, double tol,
                 std::string detail = {}) {
    return {suite, name, measured <= tol, measured, tol, std::move(detail)};
}

void suite_projection(Rng& rng, std::vector<VerifyCheck>& out) {
    for (const Grid& g : small_grids()) {
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const RadonMeasureSpec mu = random_measure(g, rng);
            const Ultrafunction dense = oracle::dense_project_measure(mu, g);
            const auto rep = oracle::compare(project_measure(mu, g).function, dense, 1e-12);
            double ref = 1.0;
            for (double v : dense.coeffs()) ref = std::max(ref, std::abs(v));
            worst = std::max(worst, std::isfinite(rep.max_abs) ? rep.max_abs / ref : 1.0);
        }
        out.push_back(make("projection", "measure-vs-dense-" + grid_name(g), worst, 1e-12));
    }
}

void suite_derivative(std::vector<VerifyCheck>& out) {
    for (const Grid& g : small_grids()) {
        for (int a = 0; a < g.dim(); ++a) {
            const auto rep = oracle::compare(assemble_derivative(g, a), oracle::dense_derivative(g, a), 1e-14);
            out.push_back(make("derivative", "sparse-vs-dense-" + grid_name(g) + "-axis" + std::to_string(a),
                               rep.max_abs / std::max(1.0, 1.0 / g.h()), 1e-14));
        }
    }
}

void suite_antisymmetry(Rng& rng, std::vector<VerifyCheck>& out) {
    for (const Grid& g : {Grid({16}, {0.0}, 1.0 / 16), Grid({8, 8}, {0.0, 0.0}, 0.125),
                          Grid({4, 4, 4}, {0.0, 0.0, 0.0}, 0.25)}) {
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const Ultrafunction u = random_function(g, rng), v = random_function(g, rng);
            for (int a = 0; a < g.dim(); ++a) {
                const auto& d = operators_for(g)->d(a);
                const double s = inner_product(d.apply(u), v) + inner_product(u, d.apply(v));
                worst = std::max(worst, std::abs(s) / (norm(u) * norm(v) / g.h()));
            }
        }
        out.push_back(make("antisymmetry", "grid-" + grid_name(g), worst, 1e-13));
    }
}

void suite_gauss(Rng& rng, std::vector<VerifyCheck>& out) {
    for (const Grid& g : {Grid({6, 6}, {0.0, 0.0}, 1.0 / 6), Grid({4, 4, 4}, {0.0, 0.0, 0.0}, 0.25)}) {
        double lemma = 0.0, theorem = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Ultrafunction> comps;
            for (int a = 0; a < g.dim(); ++a) comps.push_back(random_function(g, rng));
            const GaussReport r = gauss_check(VectorUltrafunction(std::move(comps)), random_region(g, rng));
            lemma = std::max(lemma, r.lemma_residual / r.scale);
            theorem = std::max(theorem, r.pointwise_residual / r.scale);
        }
        out.push_back(make("gauss", "lemma-" + grid_name(g), lemma, 1e-12));
        out.push_back(make("gauss", "pointwise-theorem-" + grid_name(g), theorem, 1e-12));
    }
}

void suite_conservation(std::vector<VerifyCheck>& out) {
    const Grid g({64}, {-1.0}, 2.0 / 64);
    Ultrafunction u0(g);
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        const double x = g.center(c, 0);
        u0[c] = std::abs(x) < 0.5 ? std::pow(std::cos(M_PI * x), 2) : 0.0;
    }
    SolverConfig cfg;
    cfg.T = 0.2;
    cfg.snap_every = 10;
    const SolutionTrace tr = solve(u0, FluxModel::burgers(1), cfg);
    double drift = 0.0;
    for (double q : tr.step_mass) drift = std::max(drift, std::abs(q - tr.step_mass.front()));
    out.push_back(make("conservation", "burgers-1d-mass", drift / std::abs(tr.step_mass.front()), 1e-12));
}

}  // namespace

const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> names = {"projection", "derivative", "antisymmetry", "gauss", "conservation"};
    return names;
}

std::vector<VerifyCheck> run_verify(const std::string& suite, std::uint64_t seed) {
    const auto& names = verify_suites();
    if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
        throw InvalidArgument("unknown verify suite '" + suite + "'");
    Rng rng(seed);
    std::vector<VerifyCheck> out;
    auto want = [&](const char* s) { return suite == "all" || suite == s; };
    if (want("projection")) suite_projection(rng, out);
    if (want("derivative")) suite_derivative(out);
    if (want("antisymmetry")) suite_antisymmetry(rng, out);
    if (want("gauss")) suite_gauss(rng, out);
    if (want("conservation")) suite_conservation(out);
    return out;
}

}  // namespace uf
