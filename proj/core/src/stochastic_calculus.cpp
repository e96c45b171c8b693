#include "svm/stochastic_calculus.hpp"

#include "parallel.hpp"
#include "svm/errors.hpp"
#include "svm/finite_difference.hpp"
#include "svm/wiener.hpp"

#include <cmath>

namespace svm {
namespace {

void check_path(std::span<const double> w, const char* who) {
    if (w.size() < 2) throw InvalidArgument(std::string(who) + ": path needs at least 2 points");
    if (w[0] != 0.0) throw InvalidArgument(std::string(who) + ": path must start at W_0 = 0");
}

}  // namespace

double ito_integral(std::span<const double> w) {
    check_path(w, "ito_integral");
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) sum += w[i] * (w[i + 1] - w[i]);
    return sum;
}

double stratonovich_integral(std::span<const double> w) {
    check_path(w, "stratonovich_integral");
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) sum += 0.5 * (w[i] + w[i + 1]) * (w[i + 1] - w[i]);
    return sum;
}

ProcessFunctional ProcessFunctional::wiener() {
    return {[](double, double w) { return w; }, [](double, double) { return 0.0; },
            [](double t, double w) { return t > 0.0 ? w / t : 0.0; }};
}

ProcessFunctional ProcessFunctional::time() {
    return {[](double t, double) { return t; }, [](double, double) { return 1.0; }, [](double, double) { return 1.0; }};
}

ProcessFunctional ProcessFunctional::constant(double c) {
    return {[c](double, double) { return c; }, [](double, double) { return 0.0; }, [](double, double) { return 0.0; }};
}

PartialIntegrationResult verify_partial_integration(const ProcessFunctional& x, const ProcessFunctional& y,
                                                    const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                                                    unsigned threads) {
    if (n_paths == 0) throw InvalidArgument("verify_partial_integration: n_paths must be >= 1");
    const WienerIncrements dw = sample_wiener(grid, 1, n_paths, seed, threads);
    const std::size_t n = grid.n_steps();
    const double dt = grid.dt();

    std::vector<double> integral(n_paths);
    std::vector<double> boundary(n_paths);
    detail::parallel_for(n_paths, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
            double w = 0.0;
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double t = grid.time(j);
                acc += (x.forward_derivative(t, w) * y.value(t, w) + x.value(t, w) * y.backward_derivative(t, w)) * dt;
                w += dw(p, j);
            }
            integral[p] = acc;
            boundary[p] = x.value(grid.t_end(), w) * y.value(grid.t_end(), w) -
                          x.value(grid.t_start(), 0.0) * y.value(grid.t_start(), 0.0);
        }
    });

    PartialIntegrationResult r;
    r.n_paths = n_paths;
    double mean = 0.0;
    for (std::size_t p = 0; p < n_paths; ++p) {
        mean += integral[p] - boundary[p];
        r.integral_term += integral[p];
        r.boundary_term += boundary[p];
    }
    const double inv = 1.0 / static_cast<double>(n_paths);
    mean *= inv;
    r.integral_term *= inv;
    r.boundary_term *= inv;
    double var = 0.0;
    for (std::size_t p = 0; p < n_paths; ++p) {
        const double z = integral[p] - boundary[p] - mean;
        var += z * z;
    }
    r.residual = mean;
    r.std_error = n_paths > 1 ? std::sqrt(var / static_cast<double>(n_paths - 1) * inv) : 0.0;
    return r;
}

GridField apply_ito_generator(const GridField& g, const GridField& drift, double nu, Direction direction) {
    FieldSeries gs{{g}};
    FieldSeries ds{{drift}};
    return apply_ito_generator(gs, ds, nu, direction).snapshots.front();
}

FieldSeries apply_ito_generator(const FieldSeries& g, const FieldSeries& drift, double nu, Direction direction) {
    if (g.size() != drift.size()) throw InvalidArgument("apply_ito_generator: series lengths differ");
    if (g.empty()) return {};
    const double sign = direction == Direction::forward ? 1.0 : -1.0;
    const FieldSeries dt = fd::time_derivative(g);
    FieldSeries out;
    out.snapshots.reserve(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        require_same_grid(g[k].grid(), drift[k].grid(), "apply_ito_generator");
        const GridField grad = fd::gradient(g[k]);
        const GridField lap = fd::laplacian(g[k]);
        const std::size_t m = g[k].size();
        std::vector<double> v(m);
        std::vector<std::uint8_t> ok(m);
        for (std::size_t i = 0; i < m; ++i) {
            v[i] = dt[k][i] + drift[k][i] * grad[i] + sign * nu * lap[i];
            ok[i] = dt[k].valid(i) && grad.valid(i) && lap.valid(i) && drift[k].valid(i);
            if (!ok[i]) v[i] = 0.0;
        }
        out.snapshots.emplace_back(g[k].grid(), std::move(v), std::move(ok), g[k].time());
    }
    return out;
}

}  // namespace svm
