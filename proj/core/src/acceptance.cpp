#include "svm/acceptance.hpp"

#include "svm/classical_limit.hpp"
#include "svm/density.hpp"
#include "svm/drift_fields.hpp"
#include "svm/errors.hpp"
#include "svm/fokker_planck.hpp"
#include "svm/hydrodynamics.hpp"
#include "svm/madelung.hpp"
#include "svm/noether.hpp"
#include "svm/pipeline.hpp"
#include "svm/residuals.hpp"
#include "svm/schrodinger.hpp"
#include "svm/stochastic_calculus.hpp"
#include "svm/wiener.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>

namespace svm::acceptance {
namespace {

using Clock = std::chrono::steady_clock;
constexpr double two_pi = 6.283185307179586;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Step count for a base count at dt_scale = 1.
std::size_t steps(std::size_t base, const Options& o) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(base) / o.dt_scale)));
}

/// n rounded down to a positive multiple of m.
std::size_t multiple_of(std::size_t n, std::size_t m) { return std::max(m, n - n % m); }

/// Largest divisor of n not above `target`, so a recording grid fits the native one.
std::size_t records_for(std::size_t n, std::size_t target) {
    for (std::size_t r = std::min(n, target); r > 1; --r)
        if (n % r == 0) return r;
    return 1;
}

struct Madelung {
    FieldSeries rho, u, u_tilde, v;
};

Madelung madelung_series(const WaveSeries& waves, double nu) {
    Madelung m;
    for (const auto& psi : waves) {
        DriftTriple d = drifts_from_wavefunction(psi, nu);
        m.rho.snapshots.push_back(d.rho.base);
        m.u.snapshots.push_back(std::move(d.u));
        m.u_tilde.snapshots.push_back(std::move(d.u_tilde));
        m.v.snapshots.push_back(std::move(d.v));
    }
    return m;
}

double sample_variance(std::span<const double> x) {
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (x[i] - mean);
    }
    return m2 / static_cast<double>(x.size() - 1);
}

std::vector<CheckResult> density_equivalence(const Options& o) {
    const auto t0 = Clock::now();
    const Grid1D grid{-12.0, 12.0, 960, false};
    const double nu = 0.5;
    const std::size_t n = steps(1000, o);
    const WaveSeries waves =
        solve_schrodinger(PotentialSpec::free(), gaussian_packet(grid, 0.0, 1.0, 0.0, 1.0, 1.0), {0.0, 1.0}, n, 1);
    const Madelung m = madelung_series(waves, nu);
    const std::size_t n_rec = records_for(n, 10);
    const DensityEstimate rho0 = DensityEstimate::from_field(m.rho[0]);
    // The timing criterion is single-threaded by definition.
    const PathEnsemble ens = integrate_forward(drift_from_series(m.u, "u"), nu, density_sampler(rho0),
                                               TimeGrid(0.0, 1.0, n_rec), 100000, o.seed, {n / n_rec, 1});
    const DensityEstimate kde = estimate_density(ens, n_rec, grid);
    const double l1 = l1_distance(kde.base, m.rho.snapshots.back());
    const double elapsed = seconds_since(t0);
    return {make_check("density_l1", l1, 0.05, Comparison::less_equal, "1e5 paths vs |psi(t=1)|^2"),
            make_check("runtime_seconds", elapsed, 60.0, Comparison::less_equal, "single-threaded wall clock")};
}

std::vector<CheckResult> stationary_ground_state(const Options& o) {
    const Grid1D grid{-8.0, 8.0, 320, false};
    const double nu = 0.5;
    const PotentialSpec v = PotentialSpec::harmonic(1.0, 1.0);
    const WaveFunction gs = relax_ground_state(v, gaussian_packet(grid, 0.0, 1.0, 0.0, 1.0, 1.0), 0.01, 3000);
    const DriftTriple d = drifts_from_wavefunction(gs, nu);
    const std::size_t per_period = steps(628, o);
    const PathEnsemble ens = integrate_forward(drift_from_field(d.u, "u"), nu, density_sampler(d.rho),
                                               TimeGrid(0.0, 10.0 * two_pi, 10), 100000, o.seed + 1,
                                               {per_period, o.threads});
    double worst = 0.0;
    for (std::size_t j = 0; j <= 10; ++j) worst = std::max(worst, std::abs(sample_variance(ens.slice(j)) / 0.5 - 1.0));
    return {make_check("variance_deviation", worst, 0.03, Comparison::less_equal,
                       fmt::format("max over 11 period marks, dt = {:.4g}", two_pi / static_cast<double>(per_period)))};
}

std::vector<CheckResult> ito_stratonovich_gap(const Options& o) {
    const std::size_t n_paths = 10000;
    const auto gaps = [&](std::size_t n_steps, std::uint64_t seed) {
        const TimeGrid grid(0.0, 1.0, n_steps);
        const WienerIncrements w = sample_wiener(grid, 1, n_paths, seed, o.threads);
        std::vector<double> out(n_paths);
        for (std::size_t p = 0; p < n_paths; ++p) {
            const auto path = w.path(p);
            out[p] = stratonovich_integral(path) - ito_integral(path);
        }
        return out;
    };
    const auto g = gaps(steps(1000, o), o.seed + 2);
    double mean = 0.0;
    for (double x : g) mean += x;
    mean /= static_cast<double>(n_paths);
    const double se = std::sqrt(sample_variance(g) / static_cast<double>(n_paths));

    std::vector<double> mse;
    for (std::size_t base : {250u, 500u, 1000u}) {
        const auto h = gaps(steps(base, o), o.seed + 3 + base);
        double s = 0.0;
        for (double x : h) s += (x - 0.5) * (x - 0.5);
        mse.push_back(s / static_cast<double>(n_paths));
    }
    const double order = std::min(std::log2(mse[0] / mse[1]), std::log2(mse[1] / mse[2]));
    return {make_check("gap_standard_errors", std::abs(mean - 0.5) / se, 3.0, Comparison::less_equal,
                       fmt::format("mean (S)-(I) = {:.6f}, se = {:.2e}", mean, se)),
            make_check("mean_square_order", order, 0.8, Comparison::greater_equal,
                       fmt::format("E[(gap-1/2)^2] = {:.3e}, {:.3e}, {:.3e}", mse[0], mse[1], mse[2]))};
}

std::vector<CheckResult> partial_integration(const Options& o) {
    const auto w = ProcessFunctional::wiener();
    const auto r = verify_partial_integration(w, w, TimeGrid(0.0, 1.0, steps(1000, o)), 10000, o.seed + 4, o.threads);

    // Left-point quadrature bias, averaged over batches to keep memory bounded.
    std::vector<double> bias;
    std::vector<double> bias_se;
    for (std::size_t base : {8u, 16u, 32u}) {
        double sum = 0.0, var = 0.0;
        constexpr int batches = 4;
        for (int b = 0; b < batches; ++b) {
            const auto br = verify_partial_integration(w, w, TimeGrid(0.0, 1.0, steps(base, o)), 250000,
                                                       o.seed + 100 + base * 10 + static_cast<std::uint64_t>(b),
                                                       o.threads);
            sum += br.residual;
            var += br.std_error * br.std_error;
        }
        bias.push_back(sum / batches);
        bias_se.push_back(std::sqrt(var) / batches);
    }
    const double p1 = std::log2(bias[0] / bias[1]);
    const double p2 = std::log2(bias[1] / bias[2]);
    const double worst = std::max(std::abs(p1 - 1.0), std::abs(p2 - 1.0));
    return {make_check("residual_standard_errors", std::abs(r.residual) / r.std_error, 3.0, Comparison::less_equal,
                       fmt::format("residual = {:.3e}, se = {:.2e}", r.residual, r.std_error)),
            make_check("halving_order_deviation", worst, 0.25, Comparison::less_equal,
                       fmt::format("residuals {:.4f}, {:.4f}, {:.4f} (se {:.1e}); orders {:.3f}, {:.3f}", bias[0],
                                   bias[1], bias[2], bias_se[2], p1, p2))};
}

std::vector<CheckResult> time_reversal(const Options& o) {
    const Grid1D grid{-8.0, 8.0, 512, false};
    const double nu = 0.5;
    const auto mixture = [](double x) {
        const auto g = [](double x, double m, double s) {
            return std::exp(-0.5 * (x - m) * (x - m) / (s * s)) / (s * std::sqrt(two_pi));
        };
        return 0.6 * g(x, -1.0, 0.7) + 0.4 * g(x, 1.5, 0.5);
    };
    const DensityEstimate rho0 = DensityEstimate::from_field(GridField::from_function(grid, mixture, 0.0));
    const DriftSpec u = DriftSpec::scalar(
        [](double x, double t) { return 0.5 * std::sin(x) - 0.3 * x + 0.2 * std::cos(2.0 * t); }, "u");
    const TimeSpan span{0.0, 1.0};
    const DensitySolverOptions opts{FokkerPlanckScheme::crank_nicolson, steps(1000, o), 1};
    const DensitySeries fwd = solve_fokker_planck_forward(u, nu, rho0, span, opts);
    FieldSeries u_tilde;
    for (const auto& rho : fwd) {
        const double t = *rho.time();
        u_tilde.snapshots.push_back(consistency_transform(
            GridField::from_function(grid, [&](double x) { return u(x, t); }, t), rho, nu));
    }
    const DensitySeries back = solve_fokker_planck_backward(drift_from_series(u_tilde, "u~"), nu, fwd.back(), span, opts);
    return {make_check("recovery_l1", l1_distance(back.back().base, rho0.base), 1e-3, Comparison::less_equal,
                       "512 cells, Crank-Nicolson, T = 1")};
}

struct HydroErrors {
    double rho = 0.0;
    double v = 0.0;
};

HydroErrors hydro_vs_wave(std::size_t n_cells, std::size_t n_steps) {
    const Grid1D grid{-8.0, 8.0, n_cells, false};
    const double nu = 0.5;
    const TimeSpan span{0.0, 1.0};
    const std::size_t stride = n_steps / 10;
    const WaveFunction psi0 = gaussian_packet(grid, 0.0, 1.0, 0.5, 1.0, 1.0);
    const WaveSeries waves = solve_schrodinger(PotentialSpec::free(), psi0, span, n_steps, stride);
    const Madelung m = madelung_series(waves, nu);
    const StochasticLagrangian lag{1.0, PotentialSpec::free(), nu, 0.0, 0.5};
    // The wave solver pins the end nodes to zero; the hydrodynamic state starts
    // from the unpinned packet, which differs there by O(1e-11).
    const MadelungFields start = madelung_decompose(psi0);
    const HydroSeries h = evolve_hydrodynamics(start.rho, start.v, lag, span, n_steps, stride);
    HydroErrors e;
    for (std::size_t k = 0; k < m.rho.size(); ++k) {
        e.rho = std::max(e.rho, l2_distance(h.rho[k], m.rho[k]));
        double s = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (!m.v[k].valid(i)) continue;
            const double d = h.v[k][i] - m.v[k][i];
            s += grid.weight(i) * m.rho[k][i] * d * d;
        }
        e.v = std::max(e.v, std::sqrt(s));
    }
    return e;
}

std::vector<CheckResult> madelung_equivalence(const Options& o) {
    const std::size_t n = steps(1000, o);
    const std::size_t n_fine = 2 * n;
    const HydroErrors coarse = hydro_vs_wave(320, multiple_of(n, 10));
    const HydroErrors fine = hydro_vs_wave(640, multiple_of(n_fine, 10));
    const double ratio_rho = coarse.rho / fine.rho;
    const double ratio_v = coarse.v / fine.v;
    return {make_check("l2_rho", coarse.rho, 1e-3, Comparison::less_equal, "dx = 0.05, max over snapshots"),
            make_check("l2_v_weighted", coarse.v, 1e-3, Comparison::less_equal, "sqrt(int rho dv^2), dx = 0.05"),
            make_check("refinement_order_rho", std::log2(ratio_rho), 1.7, Comparison::greater_equal,
                       fmt::format("error ratio {:.3f} on halving dx and dt", ratio_rho)),
            make_check("refinement_order_v", std::log2(ratio_v), 1.7, Comparison::greater_equal,
                       fmt::format("error ratio {:.3f} on halving dx and dt", ratio_v))};
}

std::vector<CheckResult> euler_lagrange(const Options& o) {
    std::vector<CheckResult> out;
    for (ScenarioConfig c : bundled_scenarios()) {
        if (c.potential.kind == PotentialConfig::Kind::double_well) continue;
        const std::size_t n = steps(c.n_steps, o);
        c.n_steps = multiple_of(n, c.snapshot_stride);
        const double nu = c.nu();
        const PotentialSpec v = make_potential(c);
        const WaveSeries waves = solve_schrodinger(v, make_initial_state(c), {0.0, c.t_end}, c.n_steps, c.snapshot_stride);
        const Madelung m = madelung_series(waves, nu);
        const StochasticLagrangian lag{c.mass, v, nu, 0.0, 0.5};
        const FieldSeries el = stochastic_el_residual(m.u, m.u_tilde, m.rho, lag);
        const FieldSeries canon = canonical_residual(m.u, m.u_tilde, m.rho, lag);
        double identity = 0.0;
        for (std::size_t k = 0; k < el.size(); ++k)
            for (std::size_t i = 0; i < el[k].size(); ++i)
                if (el[k].valid(i) && canon[k].valid(i)) identity = std::max(identity, std::abs(el[k][i] + canon[k][i]));
        const ResidualNorms norms = residual_norms(el, m.rho);
        out.push_back(make_check(c.name + ".el_residual", norms.max_norm, 1e-3, Comparison::less_equal,
                                 fmt::format("weighted L2 {:.2e}, {} nodes", norms.weighted_l2, norms.nodes_used)));
        out.push_back(make_check(c.name + ".el_canonical_identity", identity, 1e-10, Comparison::less_equal,
                                 "max |EL + canonical|"));
    }
    return out;
}

std::vector<CheckResult> noether_charges(const Options& o) {
    std::vector<CheckResult> out;
    {
        const Grid1D grid{-15.0, 15.0, 1500, false};
        const std::size_t n = steps(1000, o);
        const WaveSeries waves = solve_schrodinger(PotentialSpec::free(), gaussian_packet(grid, -1.0, 1.0, 1.0, 1.0, 1.0),
                                                   {0.0, 2.0}, n, std::max<std::size_t>(1, n / 20));
        const Madelung m = madelung_series(waves, 0.5);
        const double p0 = noether_momentum(m.rho[0], m.v[0], 1.0).value;
        double worst = 0.0;
        for (std::size_t k = 0; k < m.rho.size(); ++k)
            worst = std::max(worst, std::abs(noether_momentum(m.rho[k], m.v[k], 1.0).value - p0));
        out.push_back(make_check("free_momentum_relative_drift", worst / std::abs(p0), 1e-6, Comparison::less_equal,
                                 fmt::format("P(0) = {:.10f}", p0)));
    }
    {
        const Grid1D grid{-9.0, 9.0, 360, false};
        const PotentialSpec v = PotentialSpec::harmonic(1.0, 1.0);
        const std::size_t n = steps(6000, o);
        const std::size_t stride = std::max<std::size_t>(1, n / 300);
        const WaveSeries waves =
            solve_schrodinger(v, gaussian_packet(grid, 1.5, std::sqrt(0.5), 0.0, 1.0, 1.0), {0.0, two_pi},
                              multiple_of(n, stride), stride);
        const Madelung m = madelung_series(waves, 0.5);
        double worst = 0.0, scale = 0.0;
        for (const auto& s : ehrenfest_check(m.rho, m.v, v, 1.0)) {
            worst = std::max(worst, std::abs(s.momentum_rate - s.mean_force));
            scale = std::max(scale, std::abs(s.mean_force));
        }
        out.push_back(make_check("coherent_ehrenfest_relative", worst / scale, 0.01, Comparison::less_equal,
                                 "max |dP/dt + <V'>| / max |<V'>| over one period"));
    }
    {
        const Grid1D grid{-8.0, 8.0, 320, false};
        const PotentialSpec v = PotentialSpec::harmonic(1.0, 1.0);
        const StochasticLagrangian lag{1.0, v, 0.5, 0.0, 0.5};
        const auto analytic_rho = DensityEstimate::from_field(
            GridField::from_function(grid, [](double x) { return std::exp(-x * x) / std::sqrt(two_pi / 2.0); }));
        const auto u = GridField::from_function(grid, [](double x) { return -x; });
        const auto ut = GridField::from_function(grid, [](double x) { return x; });
        const double h_fields = mean_hamiltonian(u, ut, analytic_rho.base, lag);
        out.push_back(make_check("ground_energy_analytic_fields", std::abs(h_fields / 0.5 - 1.0), 5e-3,
                                 Comparison::less_equal, fmt::format("<H> = {:.8f}", h_fields)));

        const WaveFunction gs = relax_ground_state(v, gaussian_packet(grid, 0.0, 1.0, 0.0, 1.0, 1.0), 0.01, 3000);
        const DriftTriple d = drifts_from_wavefunction(gs, 0.5);
        const double h_solver = mean_hamiltonian(d.u, d.u_tilde, d.rho.base, lag);
        out.push_back(make_check("ground_energy_relaxed_fields", std::abs(h_solver / 0.5 - 1.0), 5e-3,
                                 Comparison::less_equal, fmt::format("<H> = {:.8f}", h_solver)));

        const PathEnsemble ens =
            integrate_forward(drift_from_field(d.u, "u"), 0.5, stratified_gaussian_sampler(0.0, std::sqrt(0.5)),
                              TimeGrid(0.0, 0.01, 1), 100000, o.seed + 8, {1, o.threads});
        const SampledMean h_ens = ensemble_mean_hamiltonian(ens, 0, d.u, d.u_tilde, lag);
        out.push_back(make_check("ground_energy_ensemble", std::abs(h_ens.value / 0.5 - 1.0), 5e-3,
                                 Comparison::less_equal,
                                 fmt::format("<H> = {:.6f} +- {:.1e} (1e5 paths)", h_ens.value, h_ens.std_error)));
    }
    return out;
}

std::vector<CheckResult> classical_limit(const Options& o) {
    const std::size_t n = steps(62832, o);
    std::vector<CheckResult> out;
    std::vector<double> finals;
    for (double alpha2 : {0.5, 0.0, -0.25, 1.0}) {
        const StochasticLagrangian lag{1.0, PotentialSpec::harmonic(1.0, 1.0), 0.0, 0.0, alpha2};
        const auto r = classical_limit_compare(lag, 1.0, 0.0, {0.0, two_pi}, n);
        finals.push_back(r.final_position);
        out.push_back(make_check(fmt::format("oracle_deviation_alpha2_{:g}", alpha2), r.max_deviation, 1e-6,
                                 Comparison::less_equal,
                                 fmt::format("dt = {:.3g}, x(2pi) = {:.12f}", two_pi / static_cast<double>(n),
                                             r.final_position)));
    }
    const auto [lo, hi] = std::minmax_element(finals.begin(), finals.end());
    out.push_back(make_check("alpha2_spread", *hi - *lo, 1e-12, Comparison::less_equal,
                             "spread of x(2pi) across alpha2"));
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<CheckResult> determinism(const Options& o) {
    ScenarioConfig c = bundled_scenarios().front();
    c.n_paths = 2000;
    c.dump_paths = 50;
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    const auto root = std::filesystem::temp_directory_path() / fmt::format("svm_determinism_{}", stamp);
    const std::vector<std::pair<std::string, unsigned>> runs = {{"a", 1}, {"b", 1}, {"c", std::max(2u, o.threads)}};
    for (const auto& [dir, threads] : runs) (void)run_scenario(c, root / dir, {threads, o.seed, std::nullopt, true});
    double differing = 0.0;
    std::size_t compared = 0;
    for (const auto& entry : std::filesystem::directory_iterator(root / "a")) {
        const auto name = entry.path().filename();
        const std::string ref = slurp(entry.path());
        for (const char* other : {"b", "c"}) {
            ++compared;
            if (slurp(root / other / name) != ref) differing += 1.0;
        }
    }
    std::error_code ec;
    std::filesystem::remove_all(root, ec);
    return {make_check("differing_files", differing, 0.0, Comparison::less_equal,
                       fmt::format("{} comparisons across reruns and worker counts", compared)),
            make_check("files_compared", static_cast<double>(compared), 8.0, Comparison::greater_equal)};
}

}  // namespace

bool Criterion::passed() const noexcept {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<CriterionSpec>& criteria() {
    static const std::vector<CriterionSpec> list = {
        {1, "density equivalence", density_equivalence},
        {2, "stationary ground state", stationary_ground_state},
        {3, "ito/stratonovich gap", ito_stratonovich_gap},
        {4, "partial integration", partial_integration},
        {5, "time-reversal consistency", time_reversal},
        {6, "madelung equivalence", madelung_equivalence},
        {7, "euler-lagrange certification", euler_lagrange},
        {8, "noether charges", noether_charges},
        {9, "classical limit", classical_limit},
        {10, "determinism", determinism},
    };
    return list;
}

Criterion run_criterion(const CriterionSpec& spec, const Options& options) {
    if (!(options.dt_scale > 0.0)) throw InvalidArgument("acceptance: dt_scale must be > 0");
    Criterion c{spec.id, spec.name, {}, 0.0};
    const auto t0 = Clock::now();
    try {
        c.checks = spec.run(options);
    } catch (const std::exception& e) {
        c.checks.push_back(make_check("error", std::nan(""), 0.0, Comparison::less_equal, e.what()));
    }
    c.seconds = seconds_since(t0);
    return c;
}

RunReport validate_all(const Options& options, std::vector<Criterion>* details) {
    RunReport report;
    report.scenario = "acceptance";
    report.seed = options.seed;
    for (const auto& spec : criteria()) {
        Criterion c = run_criterion(spec, options);
        for (auto check : c.checks) {
            check.name = fmt::format("C{:02d}.{}", c.id, check.name);
            report.checks.push_back(std::move(check));
        }
        report.timings.push_back({fmt::format("C{:02d}", c.id), c.seconds});
        if (details) details->push_back(std::move(c));
    }
    return report;
}

std::string summary_line(const Criterion& c) {
    std::string line = fmt::format("[{}] C{:02d} {} ({:.1f} s):", c.passed() ? "PASS" : "FAIL", c.id, c.name, c.seconds);
    for (const auto& k : c.checks)
        line += fmt::format(" {}={:.4g} ({} {:g}){}", k.name, k.measured,
                            k.comparison == Comparison::less_equal ? "<=" : ">=", k.tolerance,
                            k.passed ? "" : " ! " + k.detail);
    return line;
}

}  // namespace svm::acceptance
