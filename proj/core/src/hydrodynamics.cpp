#include "svm/hydrodynamics.hpp"

#include "hydro_force.hpp"
#include "svm/errors.hpp"
#include "svm/finite_difference.hpp"

#include <algorithm>
#include <cmath>

namespace svm {
namespace {

// Relative errors in ln rho grow at a rate of order nu (d_x ln rho)^2 wherever
// the density is small, so the far tails cannot be evolved directly. Nodes below
// tail_ratio * peak, and the two outermost nodes of an open grid, are rebuilt
// after every stage from the edge of the evolved core: ln rho quadratically and
// v linearly.
constexpr double tail_ratio = 1e-10;
constexpr std::size_t ghost = 2;
constexpr std::size_t min_core = 6;

struct State {
    std::vector<double> s;
    std::vector<double> v;
};

struct Core {
    std::size_t lo = 0;  // first evolved node
    std::size_t hi = 0;  // one past the last evolved node
};

Core find_core(const Grid1D& g, const std::vector<double>& s) {
    const std::size_t n = s.size();
    if (g.periodic) return {0, n};
    const auto peak = static_cast<std::size_t>(std::distance(s.begin(), std::max_element(s.begin(), s.end())));
    const double cut = s[peak] + std::log(tail_ratio);
    std::size_t lo = peak, hi = peak + 1;
    while (lo > ghost && s[lo - 1] >= cut) --lo;
    while (hi < n - ghost && s[hi] >= cut) ++hi;
    return {lo, hi};
}

/// Least-squares fit of ln rho = a + b d + c d^2 / 2 and v = a + b d over the
/// `fit_nodes` core nodes next to the edge, then evaluation on `count` tail
/// nodes. d is measured in nodes outward from the edge. Fits that would make
/// the density rise outward are clamped flat.
constexpr std::size_t fit_nodes = 8;

void fill_tail(State& st, std::size_t edge, std::ptrdiff_t dir, std::size_t count) {
    const auto node = [edge, dir](double d) {
        return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(edge) + dir * static_cast<std::ptrdiff_t>(d));
    };
    double m[3][4] = {};
    double n0 = 0.0, n1 = 0.0, n2 = 0.0, y0 = 0.0, y1 = 0.0;
    for (std::size_t k = 0; k < fit_nodes; ++k) {
        const double d = -static_cast<double>(k);
        const std::size_t i = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(edge) - dir * static_cast<std::ptrdiff_t>(k));
        const double phi[3] = {1.0, d, 0.5 * d * d};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m[r][c] += phi[r] * phi[c];
            m[r][3] += phi[r] * st.s[i];
        }
        n0 += 1.0;
        n1 += d;
        n2 += d * d;
        y0 += st.v[i];
        y1 += d * st.v[i];
    }
    for (int p = 0; p < 3; ++p)
        for (int r = p + 1; r < 3; ++r) {
            const double f = m[r][p] / m[p][p];
            for (int c = p; c < 4; ++c) m[r][c] -= f * m[p][c];
        }
    double q[3];
    for (int r = 2; r >= 0; --r) {
        double acc = m[r][3];
        for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * q[c];
        q[r] = acc / m[r][r];
    }
    const double slope = std::min(q[1], 0.0);
    const double curv = std::min(q[2], 0.0);
    const double vb = (n0 * y1 - n1 * y0) / (n0 * n2 - n1 * n1);
    const double va = (y0 - vb * n1) / n0;
    for (std::size_t k = 1; k <= count; ++k) {
        const double d = static_cast<double>(k);
        st.s[node(d)] = q[0] + slope * d + 0.5 * curv * d * d;
        st.v[node(d)] = va + vb * d;
    }
}

void extend_tails(const Grid1D& g, State& st, std::size_t step) {
    if (g.periodic) return;
    const Core c = find_core(g, st.s);
    if (c.hi - c.lo < std::max(min_core, fit_nodes)) throw IntegrationDiverged(step, c.lo);
    fill_tail(st, c.lo, -1, c.lo);
    fill_tail(st, c.hi - 1, 1, st.s.size() - c.hi);
}

/// Fourth-difference filter on the evolved core. Without it the grid-scale
/// modes have almost no group velocity and grow at a rate of order
/// nu |d_x ln rho| / dx. It leaves quadratics untouched.
constexpr double filter_strength = 1.0 / 32.0;

void filter(const Grid1D& g, std::vector<double>& f, std::vector<double>& work) {
    const std::size_t n = f.size();
    work = f;
    const auto at = [&](std::ptrdiff_t i) {
        const auto m = static_cast<std::ptrdiff_t>(n);
        if (g.periodic) return work[static_cast<std::size_t>(((i % m) + m) % m)];
        return work[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, m - 1))];
    };
    const std::size_t lo = g.periodic ? 0 : 2, hi = g.periodic ? n : n - 2;
    for (std::size_t k = lo; k < hi; ++k) {
        const auto i = static_cast<std::ptrdiff_t>(k);
        f[k] -= filter_strength * (at(i - 2) - 4.0 * at(i - 1) + 6.0 * at(i) - 4.0 * at(i + 1) + at(i + 2));
    }
}

void rhs(const Grid1D& g, const State& in, const StochasticLagrangian& l, std::size_t step, State& out) {
    const std::size_t n = g.size();
    const Core c = find_core(g, in.s);
    std::vector<double> ds(n), dv(n);
    std::vector<std::uint8_t> ok_s, ok_v, ok_a;
    fd::gradient(in.s, g.dx(), g.periodic, {}, ds, ok_s);
    fd::gradient(in.v, g.dx(), g.periodic, {}, dv, ok_v);
    detail::hydro_acceleration(g, in.s, in.v, {}, l, out.v, ok_a);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < c.lo || i >= c.hi) {
            out.s[i] = out.v[i] = 0.0;
            continue;
        }
        if (!ok_s[i] || !ok_v[i] || !ok_a[i] || !std::isfinite(out.v[i]))
            throw IntegrationDiverged(step, i);
        out.s[i] = -in.v[i] * ds[i] - dv[i];
    }
}

void emit(const Grid1D& g, const State& st, double t, HydroSeries& out) {
    std::vector<double> rho(st.s.size());
    std::transform(st.s.begin(), st.s.end(), rho.begin(), [](double s) { return std::exp(s); });
    out.rho.snapshots.emplace_back(g, std::move(rho), t);
    out.v.snapshots.emplace_back(g, st.v, t);
}

}  // namespace

HydroSeries evolve_hydrodynamics(const DensityEstimate& rho_initial, const GridField& v_initial,
                                 const StochasticLagrangian& lagrangian, TimeSpan span, std::size_t n_steps,
                                 std::size_t snapshot_stride) {
    lagrangian.validate();
    const Grid1D& g = rho_initial.grid();
    g.validate();
    require_same_grid(g, v_initial.grid(), "evolve_hydrodynamics");
    if (n_steps == 0 || snapshot_stride == 0)
        throw InvalidArgument("evolve_hydrodynamics: n_steps and snapshot_stride must be > 0");
    if (!(span.t_end > span.t_start)) throw InvalidArgument("evolve_hydrodynamics: t_end must exceed t_start");
    const std::size_t n = g.size();
    if (!g.periodic && n < 2 * ghost + min_core)
        throw InvalidArgument("evolve_hydrodynamics: grid too small for open ends");
    const auto rv = rho_initial.base.values();
    const double peak = *std::max_element(rv.begin(), rv.end());
    State st{std::vector<double>(n), std::vector<double>(v_initial.values().begin(), v_initial.values().end())};
    if (!(peak > 0.0) || !std::isfinite(peak))
        throw InvalidArgument("evolve_hydrodynamics: initial density has no positive peak");
    for (std::size_t i = 0; i < n; ++i)
        st.s[i] = rv[i] > 0.0 && rho_initial.base.valid(i) ? std::log(rv[i]) : -HUGE_VAL;
    const Core core = find_core(g, st.s);
    for (std::size_t i = core.lo; i < core.hi; ++i) {
        if (!(rv[i] >= density_floor * peak))
            throw DomainCoverageError("evolve_hydrodynamics: initial density falls below the floor at x = " +
                                      std::to_string(g.x(i)));
        if (!v_initial.valid(i) || !std::isfinite(st.v[i]))
            throw InvalidArgument("evolve_hydrodynamics: initial velocity is masked inside the evolved core");
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!v_initial.valid(i) || !std::isfinite(st.v[i])) st.v[i] = 0.0;

    const double h = (span.t_end - span.t_start) / static_cast<double>(n_steps);
    HydroSeries out;
    extend_tails(g, st, 0);
    emit(g, st, span.t_start, out);
    State k1{std::vector<double>(n), std::vector<double>(n)}, k2 = k1, k3 = k1, k4 = k1, tmp = k1;
    std::size_t step = 0;
    std::vector<double> work;
    const auto axpy = [&](const State& a, double c, const State& k, State& r) {
        for (std::size_t i = 0; i < n; ++i) {
            r.s[i] = a.s[i] + c * k.s[i];
            r.v[i] = a.v[i] + c * k.v[i];
        }
        extend_tails(g, r, step);
    };
    for (step = 1; step <= n_steps; ++step) {
        rhs(g, st, lagrangian, step, k1);
        axpy(st, 0.5 * h, k1, tmp);
        rhs(g, tmp, lagrangian, step, k2);
        axpy(st, 0.5 * h, k2, tmp);
        rhs(g, tmp, lagrangian, step, k3);
        axpy(st, h, k3, tmp);
        rhs(g, tmp, lagrangian, step, k4);
        for (std::size_t i = 0; i < n; ++i) {
            st.s[i] += h / 6.0 * (k1.s[i] + 2.0 * k2.s[i] + 2.0 * k3.s[i] + k4.s[i]);
            st.v[i] += h / 6.0 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
        }
        filter(g, st.s, work);
        filter(g, st.v, work);
        extend_tails(g, st, step);
        if (step % snapshot_stride == 0 || step == n_steps)
            emit(g, st, span.t_start + static_cast<double>(step) * h, out);
    }
    return out;
}

}  // namespace svm
