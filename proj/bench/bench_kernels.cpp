// OpenMP kernels against their serial references. Run with UF_THREADS=n to
// pin the thread count.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "uf/calculus.hpp"
#include "uf/conservation.hpp"
#include "uf/kernels.hpp"
#include "uf/parallel.hpp"

namespace k = uf::kernels;

namespace {

uf::Grid square(std::int64_t n) {
    const auto e = static_cast<std::size_t>(n);
    return uf::Grid({e, e}, {0.0, 0.0}, 1.0 / static_cast<double>(n));
}

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = d(eng);
    return v;
}

template <bool Serial>
void csr_apply(benchmark::State& state) {
    const uf::Grid g = square(state.range(0));
    const auto& a = uf::operators_for(g)->d(0).matrix();
    const auto x = noise(g.cell_count(), 1);
    std::vector<double> y(g.cell_count());
    for (auto _ : state) {
        if constexpr (Serial)
            k::serial::csr_apply(a, x, y);
        else
            k::csr_apply(a, x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.cell_count()));
}

template <bool Serial>
void flux_eval(benchmark::State& state) {
    const uf::Grid g = square(state.range(0));
    const auto u = noise(g.cell_count(), 2);
    std::vector<double> out(g.cell_count());
    const k::FluxFunction f = [](double t, std::span<const double> x, double v) {
        return 0.5 * v * v * std::cos(x[0] + t);
    };
    for (auto _ : state) {
        if constexpr (Serial)
            k::serial::flux_eval(f, 0.1, g, u, out);
        else
            k::flux_eval(f, 0.1, g, u, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.cell_count()));
}

template <bool Serial>
void rk4_combine(benchmark::State& state) {
    const uf::Grid g = square(state.range(0));
    const std::size_t n = g.cell_count();
    const auto u = noise(n, 3), k1 = noise(n, 4), k2 = noise(n, 5), k3 = noise(n, 6), k4 = noise(n, 7);
    std::vector<double> out(n);
    for (auto _ : state) {
        if constexpr (Serial)
            k::serial::rk4_combine(u, k1, k2, k3, k4, 1e-3, out);
        else
            k::rk4_combine(u, k1, k2, k3, k4, 1e-3, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

// Whole RK4 step of 2D Burgers; uses the OpenMP kernels throughout.
void burgers_step(benchmark::State& state) {
    const uf::Grid g = square(state.range(0));
    uf::Ultrafunction u(g);
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        const double dx = g.center(c, 0) - 0.5, dy = g.center(c, 1) - 0.5;
        u[c] = std::max(0.0, 0.1 - dx * dx - dy * dy);
    }
    const uf::FluxModel f = uf::FluxModel::burgers(2);
    for (auto _ : state) benchmark::DoNotOptimize(uf::step_rk4(0.0, u, 1e-4, f));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.cell_count()));
}

}  // namespace

BENCHMARK(csr_apply<true>)->Name("csr_apply/serial")->Arg(128)->Arg(512);
BENCHMARK(csr_apply<false>)->Name("csr_apply/omp")->Arg(128)->Arg(512);
BENCHMARK(flux_eval<true>)->Name("flux_eval/serial")->Arg(128)->Arg(512);
BENCHMARK(flux_eval<false>)->Name("flux_eval/omp")->Arg(128)->Arg(512);
BENCHMARK(rk4_combine<true>)->Name("rk4_combine/serial")->Arg(128)->Arg(512);
BENCHMARK(rk4_combine<false>)->Name("rk4_combine/omp")->Arg(128)->Arg(512);
BENCHMARK(burgers_step)->Arg(128)->Arg(256);

int main(int argc, char** argv) {
    uf::parallel::configure_from_env();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
