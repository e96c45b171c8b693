#include "svm/action.hpp"

#include "svm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace svm {
namespace {

bool node_pair_valid(const GridField& f, double x) {
    const Grid1D& g = f.grid();
    double s = (x - g.x_min) / g.dx();
    if (g.periodic) {
        const double n = static_cast<double>(g.n_cells);
        s -= n * std::floor(s / n);
        const auto i = static_cast<std::size_t>(s) % g.n_cells;
        return f.valid(i) && f.valid((i + 1) % g.n_cells);
    }
    if (s < 0.0 || s > static_cast<double>(g.n_cells)) return false;
    const auto i = std::min(static_cast<std::size_t>(s), g.n_cells - 1);
    return f.valid(i) && f.valid(i + 1);
}

bool covered(const FieldSeries& s, double x, double t) {
    if (s.size() == 1) return node_pair_valid(s[0], x);
    const bool increasing = *s[1].time() > *s[0].time();
    std::size_t k = 0;
    while (k + 2 < s.size() && (increasing ? *s[k + 1].time() < t : *s[k + 1].time() > t)) ++k;
    return node_pair_valid(s[k], x) && node_pair_valid(s[k + 1], x);
}

double sample(const FieldSeries& s, double x, double t) {
    return s.size() == 1 ? s[0].interpolate(x) : s.interpolate(x, t);
}

}  // namespace

ActionEstimate action_estimate(const StochasticLagrangian& lagrangian, const PathEnsemble& ensemble,
                               const FieldSeries& u, const FieldSeries& u_tilde) {
    lagrangian.validate();
    if (u.empty() || u_tilde.empty()) throw InvalidArgument("action_estimate: empty drift series");
    if (ensemble.dim() != 1) throw InvalidArgument("action_estimate: only one-dimensional ensembles are supported");
    if (u.size() > 1)
        for (const auto* s : {&u, &u_tilde})
            for (const auto& snap : s->snapshots)
                if (!snap.time()) throw InvalidArgument("action_estimate: multi-snapshot series need times");
    const TimeGrid& tg = ensemble.grid();
    const std::size_t n_paths = ensemble.n_paths();
    const std::size_t n_points = tg.n_points();
    const double dt = tg.dt();

    ActionEstimate est;
    std::vector<double> per_path(n_paths, 0.0);
    std::vector<std::uint8_t> complete(n_paths, 1);
    for (std::size_t j = 0; j < n_points; ++j) {
        const double t = tg.time(j);
        const double w = (j == 0 || j + 1 == n_points) ? 0.5 * dt : dt;
        double sum = 0.0;
        std::size_t used = 0;
        for (std::size_t p = 0; p < n_paths; ++p) {
            const double x = ensemble.position(p, j);
            if (!covered(u, x, t) || !covered(u_tilde, x, t)) {
                ++est.masked_samples;
                complete[p] = 0;
                continue;
            }
            const double l = lagrangian(x, sample(u, x, t), sample(u_tilde, x, t));
            sum += l;
            per_path[p] += w * l;
            ++used;
        }
        if (used == 0) throw DomainCoverageError("action_estimate: no ensemble sample is covered by the drift fields");
        est.value += w * sum / static_cast<double>(used);
    }
    // Spread of the per-path actions of fully covered paths.
    double mean = 0.0, m2 = 0.0;
    std::size_t n = 0;
    for (std::size_t p = 0; p < n_paths; ++p) {
        if (!complete[p]) continue;
        ++n;
        const double d = per_path[p] - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (per_path[p] - mean);
    }
    est.std_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    return est;
}

}  // namespace svm
