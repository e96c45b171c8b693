#include "svm/pipeline.hpp"

#include "svm/density.hpp"
#include "svm/drift_fields.hpp"
#include "svm/errors.hpp"
#include "svm/fokker_planck.hpp"
#include "svm/io.hpp"
#include "svm/lagrangian.hpp"
#include "svm/noether.hpp"
#include "svm/residuals.hpp"
#include "svm/schrodinger.hpp"
#include "svm/sde.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace svm {
namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch {
public:
    explicit Stopwatch(RunReport& r) : report_(r), start_(Clock::now()) {}
    void lap(const std::string& stage) {
        const auto now = Clock::now();
        report_.timings.push_back({stage, std::chrono::duration<double>(now - start_).count()});
        start_ = now;
    }

private:
    RunReport& report_;
    Clock::time_point start_;
};

template <class F>
auto stage(const char* module, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(module, e.what());
    }
}

double variance(std::span<const double> x) {
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (x[i] - mean);
    }
    return x.size() > 1 ? m2 / static_cast<double>(x.size() - 1) : 0.0;
}

double field_variance(const GridField& rho) {
    const Grid1D& g = rho.grid();
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double w = g.weight(i) * rho[i];
        m0 += w;
        m1 += w * g.x(i);
        m2 += w * g.x(i) * g.x(i);
    }
    const double mean = m1 / m0;
    return m2 / m0 - mean * mean;
}

/// Snapshot intervals between recorded ensemble points and written rows: the
/// smallest divisor of n_snapshots that keeps at most max_records intervals.
constexpr std::size_t max_records = 100;

std::size_t record_every(std::size_t n_snapshots) {
    for (std::size_t e = 1; e <= n_snapshots; ++e)
        if (n_snapshots % e == 0 && n_snapshots / e <= max_records) return e;
    return n_snapshots;
}

FieldSeries every_nth(const FieldSeries& s, std::size_t every) {
    FieldSeries out;
    for (std::size_t k = 0; k < s.size(); k += every) out.snapshots.push_back(s[k]);
    return out;
}

struct Fields {
    FieldSeries rho, u, u_tilde, v;
};

}  // namespace

RunReport run_scenario(const ScenarioConfig& config, const std::filesystem::path& output_dir,
                       const RunOptions& options) {
    const std::size_t stride = options.snapshot_stride.value_or(config.snapshot_stride);
    if (stride == 0 || stride > config.n_steps || config.n_steps % stride != 0)
        throw ConfigError("time.snapshot_stride", "must be >= 1 and divide time.n_steps");
    const std::uint64_t seed = options.seed.value_or(config.seed);
    const std::vector<std::string> enabled = config.checks.value_or(default_checks(config));

    RunReport report;
    report.scenario = config.name;
    report.seed = seed;
    Stopwatch clock(report);

    const double nu = config.nu();
    const double hbar = 2.0 * config.mass * nu;
    const PotentialSpec potential = make_potential(config);
    const StochasticLagrangian lagrangian{config.mass, potential, nu, 0.0, 0.5};
    const TimeSpan span{0.0, config.t_end};

    const WaveSeries waves = stage("pde_lab", [&] {
        return solve_schrodinger(potential, make_initial_state(config), span, config.n_steps, stride);
    });
    clock.lap("schrodinger");

    const Fields f = stage("drift_fields", [&] {
        Fields out;
        for (const auto& psi : waves) {
            DriftTriple d = drifts_from_wavefunction(psi, nu);
            out.rho.snapshots.push_back(d.rho.base);
            out.u.snapshots.push_back(std::move(d.u));
            out.u_tilde.snapshots.push_back(std::move(d.u_tilde));
            out.v.snapshots.push_back(std::move(d.v));
        }
        return out;
    });
    clock.lap("madelung");

    const std::size_t every = record_every(config.n_steps / stride);
    const TimeGrid record_grid(span.t_start, span.t_end, config.n_steps / stride / every);
    const DensityEstimate rho0 = DensityEstimate::from_field(f.rho[0]);
    const PathEnsemble ensemble = stage("sde_engine", [&] {
        return integrate_forward(drift_from_series(f.u, "u"), nu, density_sampler(rho0), record_grid, config.n_paths,
                                 seed, IntegrationOptions{stride * every, options.threads});
    });
    clock.lap("ensemble");

    const DensitySeries kde = stage("sde_engine", [&] {
        DensitySeries out;
        for (std::size_t j = 0; j < record_grid.n_points(); ++j)
            out.push_back(estimate_density(ensemble, j, config.grid, config.bin_width));
        return out;
    });
    clock.lap("density_estimate");

    const DensitySolverOptions fp_options{FokkerPlanckScheme::crank_nicolson, config.n_steps, stride};
    const DensitySeries fp_forward = stage("pde_lab", [&] {
        return solve_fokker_planck_forward(drift_from_series(f.u, "u"), nu, rho0, span, fp_options);
    });
    clock.lap("fokker_planck");

    const FieldSeries residual = stage("variational_engine", [&] {
        return stochastic_el_residual(f.u, f.u_tilde, f.rho, lagrangian);
    });
    clock.lap("residual");

    for (const auto& name : enabled) {
        if (name == "density_l1") {
            const double d = l1_distance(kde.back().base, f.rho.snapshots.back());
            report.checks.push_back(make_check(name, d, 0.05, Comparison::less_equal, "L1(kde, |psi|^2) at t_end"));
        } else if (name == "ensemble_variance") {
            double worst = 0.0;
            for (std::size_t j = 0; j < record_grid.n_points(); ++j) {
                const double target = field_variance(f.rho[j * every]);
                worst = std::max(worst, std::abs(variance(ensemble.slice(j)) / target - 1.0));
            }
            report.checks.push_back(
                make_check(name, worst, 0.03, Comparison::less_equal, "max relative deviation of path variance"));
        } else if (name == "fp_time_reversal") {
            const double d = stage("pde_lab", [&] {
                FieldSeries u_tilde;
                for (std::size_t k = 0; k < fp_forward.size(); ++k)
                    u_tilde.snapshots.push_back(consistency_transform(f.u[k], fp_forward[k], nu));
                const DensitySeries back =
                    solve_fokker_planck_backward(drift_from_series(u_tilde, "u~"), nu, fp_forward.back(), span, fp_options);
                return l1_distance(back.back().base, rho0.base);
            });
            report.checks.push_back(make_check(name, d, 1e-3, Comparison::less_equal, "L1(backward(forward(rho0)), rho0)"));
        } else if (name == "el_residual") {
            const ResidualNorms n = residual_norms(residual, f.rho);
            report.checks.push_back(make_check(name, n.max_norm, 1e-3, Comparison::less_equal,
                                               "max |EL residual| where rho >= 1e-6 max"));
        } else if (name == "el_canonical_identity") {
            const FieldSeries canon = canonical_residual(f.u, f.u_tilde, f.rho, lagrangian);
            double worst = 0.0;
            for (std::size_t k = 0; k < canon.size(); ++k)
                for (std::size_t i = 0; i < canon[k].size(); ++i)
                    if (canon[k].valid(i) && residual[k].valid(i))
                        worst = std::max(worst, std::abs(canon[k][i] + residual[k][i]));
            report.checks.push_back(make_check(name, worst, 1e-10, Comparison::less_equal, "max |EL + canonical|"));
        } else if (name == "momentum_conservation") {
            const double p0 = noether_momentum(f.rho[0], f.v[0], config.mass).value;
            double u2 = 0.0;
            for (std::size_t i = 0; i < f.rho[0].size(); ++i)
                if (f.u[0].valid(i)) u2 += config.grid.weight(i) * f.rho[0][i] * f.u[0][i] * f.u[0][i];
            const double scale = std::max(std::abs(p0), config.mass * std::sqrt(u2));
            double worst = 0.0;
            for (std::size_t k = 0; k < f.rho.size(); ++k)
                worst = std::max(worst, std::abs(noether_momentum(f.rho[k], f.v[k], config.mass).value - p0));
            report.checks.push_back(make_check(name, worst / scale, 1e-6, Comparison::less_equal,
                                               "max |P(t) - P(0)| / max(|P(0)|, m rms(u))"));
        } else if (name == "energy_conservation") {
            const double e0 = mean_hamiltonian(f.u[0], f.u_tilde[0], f.rho[0], lagrangian);
            double worst = 0.0;
            for (std::size_t k = 0; k < f.rho.size(); ++k)
                worst = std::max(worst, std::abs(mean_hamiltonian(f.u[k], f.u_tilde[k], f.rho[k], lagrangian) - e0));
            report.checks.push_back(
                make_check(name, worst / std::abs(e0), 1e-4, Comparison::less_equal, "max |<H>(t) - <H>(0)| / |<H>(0)|"));
        } else if (name == "ehrenfest") {
            const auto samples = ehrenfest_check(f.rho, f.v, potential, config.mass);
            double worst = 0.0, scale = 0.0;
            for (const auto& s : samples) {
                worst = std::max(worst, std::abs(s.momentum_rate - s.mean_force));
                scale = std::max(scale, std::abs(s.mean_force));
            }
            report.checks.push_back(make_check(name, scale > 0.0 ? worst / scale : worst, 0.01, Comparison::less_equal,
                                               "max |dP/dt + <V'>| / max |<V'>|"));
        } else if (name == "ground_state_energy") {
            if (config.potential.kind != PotentialConfig::Kind::harmonic)
                throw ConfigError("checks", "ground_state_energy needs a harmonic potential");
            const double target = 0.5 * hbar * config.potential.omega;
            const double e = mean_hamiltonian(f.u[0], f.u_tilde[0], f.rho[0], lagrangian);
            report.checks.push_back(make_check(name, std::abs(e / target - 1.0), 5e-3, Comparison::less_equal,
                                               "|<H> / (hbar omega / 2) - 1|"));
        }
    }
    clock.lap("checks");

    if (options.write_outputs) {
        std::filesystem::create_directories(output_dir);
        const FieldSeries rho_rows = every_nth(f.rho, every);
        io::write_field_csv(output_dir / "fields.csv", {{"rho", rho_rows},
                                                        {"v", every_nth(f.v, every)},
                                                        {"u", every_nth(f.u, every)},
                                                        {"u_tilde", every_nth(f.u_tilde, every)},
                                                        {"el_residual", every_nth(residual, every)}});
        FieldSeries kde_series = to_field_series(kde);
        FieldSeries fp_series = every_nth(to_field_series(fp_forward), every);
        for (std::size_t k = 0; k < kde_series.size(); ++k) {
            kde_series.snapshots[k].set_time(rho_rows[k].time());
            fp_series.snapshots[k].set_time(rho_rows[k].time());
        }
        io::write_field_csv(output_dir / "density.csv",
                            {{"rho_wave", rho_rows}, {"rho_fokker_planck", fp_series}, {"rho_ensemble", kde_series}});
        io::write_ensemble_csv(output_dir / "ensemble.csv", ensemble, config.dump_paths);
        io::write_text(output_dir / "report.json", to_json(report).dump(2) + "\n");
        clock.lap("write");
    }
    return report;
}

}  // namespace svm
