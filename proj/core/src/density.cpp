#include "svm/density.hpp"

#include "svm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace svm {

DensityEstimate DensityEstimate::from_field(GridField field) {
    auto& v = field.mutable_values();
    for (double& x : v) {
        if (!std::isfinite(x)) throw InvalidArgument("density: non-finite value");
        x = std::max(x, 0.0);
    }
    const double mass = field.integral();
    if (!(mass > 0.0)) throw InvalidArgument("density: zero total mass");
    for (double& x : v) x /= mass;
    return DensityEstimate{GridField(field.grid(), std::vector<double>(v.begin(), v.end()), field.time()), 0, 0.0};
}

FieldSeries to_field_series(const DensitySeries& series) {
    FieldSeries out;
    out.snapshots.reserve(series.size());
    for (const auto& d : series) out.snapshots.push_back(d.base);
    return out;
}

double silverman_bandwidth(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) throw InsufficientSamples("silverman_bandwidth: need at least 2 samples");
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(n - 1);
    const double h = 1.06 * std::sqrt(var) * std::pow(static_cast<double>(n), -0.2);
    if (!(h > 0.0)) throw InsufficientSamples("silverman_bandwidth: samples have zero spread");
    return h;
}

DensityEstimate estimate_density(std::span<const double> samples, const Grid1D& layout,
                                 std::optional<double> bandwidth) {
    layout.validate();
    if (samples.empty()) throw InsufficientSamples("estimate_density: no samples");
    const double h = bandwidth ? *bandwidth : silverman_bandwidth(samples);
    if (!(h > 0.0)) throw InvalidArgument("estimate_density: bandwidth must be > 0");

    const std::size_t m = layout.size();
    const double dx = layout.dx();
    const double length = layout.x_max - layout.x_min;
    const double reach = 8.0 * h;
    const double norm = 1.0 / (static_cast<double>(samples.size()) * h * std::sqrt(2.0 * std::numbers::pi));
    std::vector<double> rho(m, 0.0);
    std::size_t covered = 0;
    for (double s : samples) {
        if (layout.periodic || (s >= layout.x_min && s <= layout.x_max)) ++covered;
        const double lo = (s - reach - layout.x_min) / dx;
        const double hi = (s + reach - layout.x_min) / dx;
        if (!layout.periodic) {
            const auto i0 = static_cast<long>(std::max(0.0, std::ceil(lo)));
            const auto i1 = static_cast<long>(std::min(static_cast<double>(m - 1), std::floor(hi)));
            for (long i = i0; i <= i1; ++i) {
                const double z = (layout.x(static_cast<std::size_t>(i)) - s) / h;
                rho[static_cast<std::size_t>(i)] += std::exp(-0.5 * z * z);
            }
        } else {
            const auto i0 = static_cast<long>(std::ceil(lo));
            const auto i1 = static_cast<long>(std::floor(hi));
            for (long i = i0; i <= i1; ++i) {
                long k = i % static_cast<long>(m);
                if (k < 0) k += static_cast<long>(m);
                double d = layout.x_min + static_cast<double>(i) * dx - s;
                d -= length * std::round(d / length);
                const double z = d / h;
                rho[static_cast<std::size_t>(k)] += std::exp(-0.5 * z * z);
            }
        }
    }
    if (covered == 0) throw DomainCoverageError("estimate_density: every sample lies outside the grid");
    for (double& r : rho) r *= norm;
    DensityEstimate out = DensityEstimate::from_field(GridField(layout, std::move(rho)));
    out.n_samples = samples.size();
    out.bandwidth = h;
    return out;
}

DensityEstimate estimate_density(const PathEnsemble& ensemble, std::size_t point, const Grid1D& layout,
                                 std::optional<double> bandwidth) {
    if (point > ensemble.grid().n_steps()) throw InvalidArgument("estimate_density: point outside ensemble grid");
    const std::vector<double> xs = ensemble.slice(point, 0);
    DensityEstimate d = estimate_density(xs, layout, bandwidth);
    d.base.set_time(ensemble.grid().time(point));
    return d;
}

double l1_distance(const GridField& a, const GridField& b) {
    require_same_grid(a.grid(), b.grid(), "l1_distance");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.grid().weight(i) * std::abs(a[i] - b[i]);
    return s;
}

double l2_distance(const GridField& a, const GridField& b) {
    require_same_grid(a.grid(), b.grid(), "l2_distance");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.grid().weight(i) * (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

PointSampler density_sampler(const DensityEstimate& rho) {
    const Grid1D grid = rho.grid();
    const std::size_t m = rho.base.size();
    // Cell masses from the trapezoid rule; uniform within a cell.
    const std::size_t cells = grid.periodic ? m : m - 1;
    std::vector<double> cdf(cells + 1, 0.0);
    for (std::size_t c = 0; c < cells; ++c) {
        const double a = rho[c];
        const double b = rho[(c + 1) % m];
        cdf[c + 1] = cdf[c] + 0.5 * (a + b) * grid.dx();
    }
    const double total = cdf.back();
    if (!(total > 0.0)) throw InvalidArgument("density_sampler: zero mass");
    for (double& c : cdf) c /= total;
    return [grid, cdf = std::move(cdf)](std::size_t, std::size_t, Engine& rng, std::span<double> out) {
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        for (double& o : out) {
            const double u = uniform(rng);
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            std::size_t c = it == cdf.begin() ? 0 : static_cast<std::size_t>(it - cdf.begin()) - 1;
            if (c >= cdf.size() - 1) c = cdf.size() - 2;
            const double span = cdf[c + 1] - cdf[c];
            const double w = span > 0.0 ? (u - cdf[c]) / span : 0.5;
            o = grid.x_min + (static_cast<double>(c) + w) * grid.dx();
        }
    };
}

}  // namespace svm
