#include "svm/finite_difference.hpp"

#include "svm/errors.hpp"

#include <algorithm>

namespace svm::fd {
namespace {

struct Run {
    std::size_t begin;
    std::size_t end;  // one past
};

std::vector<Run> valid_runs(std::size_t n, std::span<const std::uint8_t> valid) {
    std::vector<Run> runs;
    std::size_t i = 0;
    while (i < n) {
        while (i < n && !valid.empty() && valid[i] == 0) ++i;
        if (i >= n) break;
        const std::size_t b = i;
        while (i < n && (valid.empty() || valid[i] != 0)) ++i;
        runs.push_back({b, i});
    }
    return runs;
}

bool all_valid(std::span<const std::uint8_t> valid) {
    return std::all_of(valid.begin(), valid.end(), [](std::uint8_t v) { return v != 0; });
}

}  // namespace

void gradient(std::span<const double> f, double dx, bool periodic, std::span<const std::uint8_t> valid,
              std::span<double> out, std::vector<std::uint8_t>& out_valid) {
    const std::size_t n = f.size();
    out_valid.assign(n, 0);
    std::fill(out.begin(), out.end(), 0.0);
    const double inv = 1.0 / (2.0 * dx);
    if (periodic && all_valid(valid)) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = (f[(i + 1) % n] - f[(i + n - 1) % n]) * inv;
            out_valid[i] = 1;
        }
        return;
    }
    for (const Run& r : valid_runs(n, valid)) {
        if (r.end - r.begin < 3) continue;
        const std::size_t b = r.begin;
        const std::size_t e = r.end - 1;
        out[b] = (-3.0 * f[b] + 4.0 * f[b + 1] - f[b + 2]) * inv;
        out[e] = (3.0 * f[e] - 4.0 * f[e - 1] + f[e - 2]) * inv;
        for (std::size_t i = b + 1; i < e; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv;
        for (std::size_t i = b; i <= e; ++i) out_valid[i] = 1;
    }
}

void second_derivative(std::span<const double> f, double dx, bool periodic, std::span<const std::uint8_t> valid,
                       std::span<double> out, std::vector<std::uint8_t>& out_valid) {
    const std::size_t n = f.size();
    out_valid.assign(n, 0);
    std::fill(out.begin(), out.end(), 0.0);
    const double inv = 1.0 / (dx * dx);
    if (periodic && all_valid(valid)) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = (f[(i + 1) % n] - 2.0 * f[i] + f[(i + n - 1) % n]) * inv;
            out_valid[i] = 1;
        }
        return;
    }
    for (const Run& r : valid_runs(n, valid)) {
        if (r.end - r.begin < 4) continue;
        const std::size_t b = r.begin;
        const std::size_t e = r.end - 1;
        out[b] = (2.0 * f[b] - 5.0 * f[b + 1] + 4.0 * f[b + 2] - f[b + 3]) * inv;
        out[e] = (2.0 * f[e] - 5.0 * f[e - 1] + 4.0 * f[e - 2] - f[e - 3]) * inv;
        for (std::size_t i = b + 1; i < e; ++i) out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
        for (std::size_t i = b; i <= e; ++i) out_valid[i] = 1;
    }
}

GridField gradient(const GridField& f) {
    std::vector<double> out(f.size());
    std::vector<std::uint8_t> ok;
    const auto mask = f.mask();
    gradient(f.values(), f.grid().dx(), f.grid().periodic, mask, out, ok);
    return GridField(f.grid(), std::move(out), std::move(ok), f.time());
}

GridField laplacian(const GridField& f) {
    std::vector<double> out(f.size());
    std::vector<std::uint8_t> ok;
    const auto mask = f.mask();
    second_derivative(f.values(), f.grid().dx(), f.grid().periodic, mask, out, ok);
    return GridField(f.grid(), std::move(out), std::move(ok), f.time());
}

FieldSeries time_derivative(const FieldSeries& series) {
    FieldSeries out;
    const std::size_t n = series.size();
    if (n == 0) return out;
    const Grid1D grid = series[0].grid();
    for (const auto& s : series.snapshots) require_same_grid(grid, s.grid(), "time_derivative");
    const std::vector<double> t = series.times();
    const std::size_t m = series[0].size();
    out.snapshots.reserve(n);
    if (n == 1) {
        out.snapshots.emplace_back(grid, std::vector<double>(m, 0.0), series[0].mask(), series[0].time());
        return out;
    }
    if (n == 2) {
        const double h = t[1] - t[0];
        std::vector<double> d(m);
        for (std::size_t i = 0; i < m; ++i) d[i] = (series[1][i] - series[0][i]) / h;
        std::vector<std::uint8_t> ok(m);
        for (std::size_t i = 0; i < m; ++i) ok[i] = series[0].valid(i) && series[1].valid(i);
        out.snapshots.emplace_back(grid, d, ok, series[0].time());
        out.snapshots.emplace_back(grid, d, ok, series[1].time());
        return out;
    }
    // Three-point Lagrange weights on possibly uneven spacing.
    auto weights = [](double x0, double x1, double x2, double at, double w[3]) {
        w[0] = ((at - x1) + (at - x2)) / ((x0 - x1) * (x0 - x2));
        w[1] = ((at - x0) + (at - x2)) / ((x1 - x0) * (x1 - x2));
        w[2] = ((at - x0) + (at - x1)) / ((x2 - x0) * (x2 - x1));
    };
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t c = std::clamp<std::size_t>(k, 1, n - 2);
        double w[3];
        weights(t[c - 1], t[c], t[c + 1], t[k], w);
        std::vector<double> d(m);
        std::vector<std::uint8_t> ok(m);
        for (std::size_t i = 0; i < m; ++i) {
            d[i] = w[0] * series[c - 1][i] + w[1] * series[c][i] + w[2] * series[c + 1][i];
            ok[i] = series[c - 1].valid(i) && series[c].valid(i) && series[c + 1].valid(i);
        }
        out.snapshots.emplace_back(grid, std::move(d), std::move(ok), series[k].time());
    }
    return out;
}

}  // namespace svm::fd
