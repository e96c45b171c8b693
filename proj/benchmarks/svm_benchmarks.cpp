// Throughput of the hot loops: path sampling, the wave and density solvers,
// kernel density estimation and the residual operator.
#include "svm/density.hpp"
#include "svm/drift_fields.hpp"
#include "svm/fokker_planck.hpp"
#include "svm/lagrangian.hpp"
#include "svm/residuals.hpp"
#include "svm/schrodinger.hpp"
#include "svm/sde.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace svm;

void BM_EulerMaruyamaOrnsteinUhlenbeck(benchmark::State& state) {
    const auto n_paths = static_cast<std::size_t>(state.range(0));
    const auto u = DriftSpec::scalar([](double x, double) { return -x; });
    for (auto _ : state) {
        auto e = integrate_forward(u, 0.5, gaussian_sampler(0.0, 1.0), TimeGrid(0.0, 1.0, 100), n_paths, 1);
        benchmark::DoNotOptimize(e.raw().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n_paths) * 100);
}
BENCHMARK(BM_EulerMaruyamaOrnsteinUhlenbeck)->Arg(1000)->Arg(10000);

void BM_CrankNicolsonSchrodinger(benchmark::State& state) {
    const Grid1D g{-10.0, 10.0, static_cast<std::size_t>(state.range(0)), false};
    const auto psi = gaussian_packet(g, 0.0, 1.0, 1.0, 1.0, 1.0);
    const auto v = PotentialSpec::harmonic(1.0);
    for (auto _ : state) {
        auto out = solve_schrodinger(v, psi, {0.0, 1.0}, 100, 100);
        benchmark::DoNotOptimize(out.back().values().data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}
BENCHMARK(BM_CrankNicolsonSchrodinger)->Arg(400)->Arg(1600);

void BM_FokkerPlanckForward(benchmark::State& state) {
    const Grid1D g{-10.0, 10.0, static_cast<std::size_t>(state.range(0)), false};
    const auto rho = DensityEstimate::from_field(GridField::from_function(g, [](double x) { return std::exp(-x * x); }));
    const auto u = DriftSpec::scalar([](double x, double) { return -x; });
    for (auto _ : state) {
        auto out = solve_fokker_planck_forward(u, 0.5, rho, {0.0, 1.0}, {FokkerPlanckScheme::crank_nicolson, 100, 100});
        benchmark::DoNotOptimize(out.back().base.values().data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}
BENCHMARK(BM_FokkerPlanckForward)->Arg(400)->Arg(1600);

void BM_KernelDensityEstimate(benchmark::State& state) {
    const auto e = integrate_forward(DriftSpec::zero(), 0.5, gaussian_sampler(0.0, 1.0), TimeGrid(0.0, 0.1, 1),
                                     static_cast<std::size_t>(state.range(0)), 2);
    const Grid1D g{-6.0, 6.0, 400, false};
    for (auto _ : state) {
        auto rho = estimate_density(e, 1, g);
        benchmark::DoNotOptimize(rho.base.values().data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KernelDensityEstimate)->Arg(10000)->Arg(100000);

void BM_ElResidual(benchmark::State& state) {
    const Grid1D g{-8.0, 8.0, 800, false};
    const auto psi = gaussian_packet(g, 0.0, 1.0, 0.5, 1.0, 1.0);
    const auto waves = solve_schrodinger(PotentialSpec::harmonic(1.0), psi, {0.0, 1.0}, 200, 10);
    FieldSeries rho, u, ut;
    for (const auto& w : waves) {
        DriftTriple d = drifts_from_wavefunction(w, 0.5);
        rho.snapshots.push_back(d.rho.base);
        u.snapshots.push_back(d.u);
        ut.snapshots.push_back(d.u_tilde);
    }
    const StochasticLagrangian lag{1.0, PotentialSpec::harmonic(1.0), 0.5};
    for (auto _ : state) {
        auto r = stochastic_el_residual(u, ut, rho, lag);
        benchmark::DoNotOptimize(r.snapshots.back().values().data());
    }
}
BENCHMARK(BM_ElResidual);

}  // namespace

BENCHMARK_MAIN();
