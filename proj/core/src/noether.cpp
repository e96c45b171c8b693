#include "svm/noether.hpp"

#include "svm/errors.hpp"

#include <cmath>

namespace svm {

NoetherCharge noether_momentum(const GridField& rho, const GridField& v, double mass) {
    require_same_grid(rho.grid(), v.grid(), "noether_momentum");
    const Grid1D& g = rho.grid();
    double p = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (v.valid(i) && rho.valid(i)) p += g.weight(i) * rho[i] * v[i];
    return {"momentum", mass * p, rho.time() ? rho.time() : v.time()};
}

std::vector<EhrenfestSample> ehrenfest_check(const FieldSeries& rho, const FieldSeries& v,
                                             const PotentialSpec& potential, double mass) {
    if (rho.size() != v.size()) throw InvalidArgument("ehrenfest_check: series lengths differ");
    if (rho.size() < 3) throw InvalidArgument("ehrenfest_check: needs at least 3 snapshots");
    const std::size_t n = rho.size();
    std::vector<double> t(n), p(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!rho[k].time()) throw InvalidArgument("ehrenfest_check: snapshots need times");
        t[k] = *rho[k].time();
        p[k] = noether_momentum(rho[k], v[k], mass).value;
    }
    std::vector<EhrenfestSample> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        // Three-point Lagrange derivative on possibly nonuniform times.
        const std::size_t c = k == 0 ? 1 : (k + 1 == n ? n - 2 : k);
        const double t0 = t[c - 1], t1 = t[c], t2 = t[c + 1], x = t[k];
        const double d0 = ((x - t1) + (x - t2)) / ((t0 - t1) * (t0 - t2));
        const double d1 = ((x - t0) + (x - t2)) / ((t1 - t0) * (t1 - t2));
        const double d2 = ((x - t0) + (x - t1)) / ((t2 - t0) * (t2 - t1));
        const Grid1D& g = rho[k].grid();
        double force = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (rho[k].valid(i)) force -= g.weight(i) * rho[k][i] * potential.gradient(g.x(i));
        out[k] = {t[k], p[k], d0 * p[c - 1] + d1 * p[c] + d2 * p[c + 1], force};
    }
    return out;
}

double mean_hamiltonian(const GridField& u, const GridField& u_tilde, const GridField& rho,
                        const StochasticLagrangian& lagrangian) {
    lagrangian.validate();
    require_same_grid(u.grid(), rho.grid(), "mean_hamiltonian");
    require_same_grid(u_tilde.grid(), rho.grid(), "mean_hamiltonian");
    const Grid1D& g = rho.grid();
    const double m = lagrangian.mass;
    double h = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!u.valid(i) || !u_tilde.valid(i) || !rho.valid(i)) continue;
        h += g.weight(i) * rho[i] * hamiltonian_eval({g.x(i), m * u[i], m * u_tilde[i]}, lagrangian);
    }
    return h;
}

SampledMean ensemble_mean_hamiltonian(const PathEnsemble& ensemble, std::size_t point, const GridField& u,
                                      const GridField& u_tilde, const StochasticLagrangian& lagrangian) {
    lagrangian.validate();
    if (ensemble.dim() != 1) throw InvalidArgument("ensemble_mean_hamiltonian: only one-dimensional ensembles");
    if (point >= ensemble.grid().n_points()) throw InvalidArgument("ensemble_mean_hamiltonian: point out of range");
    const std::size_t n = ensemble.n_paths();
    if (n < 2) throw InsufficientSamples("ensemble_mean_hamiltonian: needs at least 2 paths");
    const GridField uf = u.filled();
    const GridField utf = u_tilde.filled();
    const double m = lagrangian.mass;
    double mean = 0.0, m2 = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        const double x = ensemble.position(p, point);
        const double h = hamiltonian_eval({x, m * uf.interpolate(x), m * utf.interpolate(x)}, lagrangian);
        const double d = h - mean;
        mean += d / static_cast<double>(p + 1);
        m2 += d * (h - mean);
    }
    return {mean, std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n))};
}

}  // namespace svm
