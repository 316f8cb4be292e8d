#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "uf/calculus.hpp"
#include "uf/grid.hpp"
#include "uf/kernels.hpp"
#include "uf/ultraspace.hpp"

namespace uf {

/// Flux F(t, x, u) of a scalar conservation law u_t + div F = 0, one
/// component per axis.
struct FluxModel {
    std::vector<kernels::FluxFunction> components;
    bool zero_at_zero = false;
    // declared growth bound |F| <= c1 + c2 |u|
    double c1 = 0.0;
    double c2 = 0.0;
    std::string description;

    int dim() const { return static_cast<int>(components.size()); }

    // F_j = u^2 / 2 on every axis; growth constants valid for |u| <= u_bound.
    static FluxModel burgers(int dim, double u_bound = 1.0);
    // F_j = a_j u
    static FluxModel advection(std::vector<double> velocity);
    // One expression in t, x, y, z, u per axis.
    static FluxModel from_expressions(const std::vector<std::string>& exprs, double c1 = 0.0, double c2 = 0.0);
};

// "burgers", "advection:a[,b,..]", or "custom:<expr>[;<expr>..]" (a bare
// expression is accepted too). A single velocity or expression is used on
// every axis.
FluxModel parse_flux(std::string_view spec, int dim);

struct FluxValidation {
    bool zero_at_zero_holds = true;
    std::size_t growth_violations = 0;
    double max_growth_excess = 0.0;
    // sum over axes of max |dF_j/du| on the sampled range
    double max_speed = 0.0;
    // finite differences stayed finite and bounded under step halving
    bool differentiable = true;
};

// Samples t in [t0, t1], u in [u_min, u_max] and up to 64 cell centres.
FluxValidation validate_flux(const FluxModel& f, const Grid& grid, double t0, double t1, double u_min,
                             double u_max);

struct SolverConfig {
    double dt = 0.0;  // 0 selects cfl * h / max speed
    double T = 0.0;
    double cfl = 0.2;
    std::size_t snap_every = 1;  // steps between snapshots
    int support_margin = 2;
    double support_threshold = 0.0;  // |u| above this counts as support
};

struct SolutionTrace {
    Grid grid;
    double dt = 0.0;
    std::vector<double> times;
    std::vector<Ultrafunction> snapshots;
    std::vector<double> step_times;  // includes t = 0
    std::vector<double> step_mass;   // Q at each step time
    FluxValidation validation;
};

// Phi_j with cell values F_j(t, centre, u_c).
VectorUltrafunction cellwise_flux(double t, const Ultrafunction& u, const FluxModel& f);

// -div Phi, the right-hand side of the stage ODE.
Ultrafunction semidiscrete_rhs(double t, const Ultrafunction& u, const FluxModel& f);

Ultrafunction step_rk4(double t, const Ultrafunction& u, double dt, const FluxModel& f);

// Q = integral of u, fixed-order summation.
double total_mass(const Ultrafunction& u);

double default_dt(const Ultrafunction& u0, const FluxModel& f, double cfl = 0.2);

// Throws MarginViolation if the state's support reaches the margin band and
// NonFiniteState on non-finite flux or state.
SolutionTrace solve(const Ultrafunction& u0, const FluxModel& f, const SolverConfig& config);

struct ConservationRow {
    double t = 0.0;
    double mass = 0.0;          // integral over omega of u
    double rate = 0.0;          // integral over omega of the rhs
    double surface = 0.0;       // -integral over the boundary of Phi . nu (pointwise pairing)
    double residual = 0.0;      // |rate - surface|
    double scale = 0.0;         // flux_scale(Phi)
    double fd_rate = 0.0;       // centred time difference of mass, NaN at the ends
    double fd_residual = 0.0;   // |fd_rate - rate|
};

std::vector<ConservationRow> conservation_report(const SolutionTrace& trace, const Region& omega, const FluxModel& f);

}  // namespace uf
