#include "svm/residuals.hpp"

#include "hydro_force.hpp"
#include "svm/density.hpp"
#include "svm/errors.hpp"
#include "svm/finite_difference.hpp"
#include "svm/stochastic_calculus.hpp"

#include <algorithm>
#include <cmath>

namespace svm {
namespace {

void check_series(const FieldSeries& u, const FieldSeries& ut, const FieldSeries& rho, const char* who) {
    if (u.size() != ut.size() || u.size() != rho.size())
        throw InvalidArgument(std::string(who) + ": u, u~ and rho series differ in length");
    for (std::size_t k = 0; k < u.size(); ++k) {
        require_same_grid(u[k].grid(), ut[k].grid(), who);
        require_same_grid(u[k].grid(), rho[k].grid(), who);
    }
}

std::vector<std::uint8_t> floor_mask(const GridField& rho) {
    const auto v = rho.values();
    const double peak = *std::max_element(v.begin(), v.end());
    std::vector<std::uint8_t> ok(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) ok[i] = rho.valid(i) && v[i] > 0.0 && v[i] >= density_floor * peak;
    return ok;
}

FieldSeries scaled(const FieldSeries& s, double c) {
    FieldSeries out = s;
    for (auto& snap : out.snapshots)
        for (double& x : snap.mutable_values()) x *= c;
    return out;
}

}  // namespace

FieldSeries stochastic_el_residual(const FieldSeries& u, const FieldSeries& u_tilde, const FieldSeries& rho,
                                   const StochasticLagrangian& lagrangian) {
    lagrangian.validate();
    lagrangian.require_time_reversible();
    check_series(u, u_tilde, rho, "stochastic_el_residual");
    const double m = lagrangian.mass;
    const double nu = lagrangian.nu;
    // D~u along the backward process, D u~ along the forward one.
    const FieldSeries back = apply_ito_generator(u, u_tilde, nu, Direction::backward);
    const FieldSeries fwd = apply_ito_generator(u_tilde, u, nu, Direction::forward);
    FieldSeries out;
    out.snapshots.reserve(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        const Grid1D& g = u[k].grid();
        const auto rho_ok = floor_mask(rho[k]);
        std::vector<double> r(g.size(), 0.0);
        std::vector<std::uint8_t> ok(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            ok[i] = rho_ok[i] && back[k].valid(i) && fwd[k].valid(i);
            if (ok[i]) r[i] = -0.5 * m * (back[k][i] + fwd[k][i]) - lagrangian.potential.gradient(g.x(i));
        }
        out.snapshots.emplace_back(g, std::move(r), std::move(ok), u[k].time());
    }
    return out;
}

FieldSeries canonical_residual(const FieldSeries& u, const FieldSeries& u_tilde, const FieldSeries& rho,
                               const StochasticLagrangian& lagrangian) {
    lagrangian.validate();
    lagrangian.require_time_reversible();
    check_series(u, u_tilde, rho, "canonical_residual");
    const double m = lagrangian.mass;
    const double nu = lagrangian.nu;
    const FieldSeries p = scaled(u, m);
    const FieldSeries p_bar = scaled(u_tilde, m);
    const FieldSeries d_tilde_p = apply_ito_generator(p, u_tilde, nu, Direction::backward);
    const FieldSeries d_p_bar = apply_ito_generator(p_bar, u, nu, Direction::forward);
    FieldSeries out;
    out.snapshots.reserve(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        const Grid1D& g = u[k].grid();
        const auto rho_ok = floor_mask(rho[k]);
        std::vector<double> r(g.size(), 0.0);
        std::vector<std::uint8_t> ok(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            ok[i] = rho_ok[i] && d_tilde_p[k].valid(i) && d_p_bar[k].valid(i);
            if (!ok[i]) continue;
            const CanonicalState state{g.x(i), p[k][i], p_bar[k][i]};
            r[i] = 0.5 * d_tilde_p[k][i] + 0.5 * d_p_bar[k][i] + hamiltonian_position_gradient(state, lagrangian);
        }
        out.snapshots.emplace_back(g, std::move(r), std::move(ok), u[k].time());
    }
    return out;
}

ResidualNorms residual_norms(const FieldSeries& residual, const FieldSeries& rho, double relative_floor) {
    if (residual.size() != rho.size()) throw InvalidArgument("residual_norms: series lengths differ");
    ResidualNorms n;
    for (std::size_t k = 0; k < residual.size(); ++k) {
        const GridField& r = residual[k];
        const GridField& d = rho[k];
        require_same_grid(r.grid(), d.grid(), "residual_norms");
        const auto dv = d.values();
        const double peak = *std::max_element(dv.begin(), dv.end());
        double l2 = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (!r.valid(i) || dv[i] < relative_floor * peak) continue;
            n.max_norm = std::max(n.max_norm, std::abs(r[i]));
            l2 += r.grid().weight(i) * dv[i] * r[i] * r[i];
            ++n.nodes_used;
        }
        n.weighted_l2 = std::max(n.weighted_l2, std::sqrt(l2));
    }
    return n;
}

void detail::hydro_acceleration(const Grid1D& g, std::span<const double> s, std::span<const double> v,
                                std::span<const std::uint8_t> valid, const StochasticLagrangian& l,
                                std::span<double> out, std::vector<std::uint8_t>& out_valid) {
    const std::size_t n = g.size();
    const double dx = g.dx();
    std::vector<double> s1(n), s2(n), q(n), dq(n), dv(n);
    std::vector<std::uint8_t> ok1, ok2, okq, okv;
    fd::gradient(s, dx, g.periodic, valid, s1, ok1);
    fd::second_derivative(s, dx, g.periodic, valid, s2, ok2);
    std::vector<std::uint8_t> q_valid(n);
    for (std::size_t i = 0; i < n; ++i) {
        q_valid[i] = ok1[i] && ok2[i];
        q[i] = q_valid[i] ? 0.5 * s2[i] + 0.25 * s1[i] * s1[i] : 0.0;
    }
    fd::gradient(q, dx, g.periodic, q_valid, dq, okq);
    fd::gradient(v, dx, g.periodic, valid, dv, okv);
    const double c = 2.0 * l.nu * l.nu;
    out_valid.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        out_valid[i] = okq[i] && okv[i];
        out[i] = out_valid[i] ? -v[i] * dv[i] - l.potential.gradient(g.x(i)) / l.mass + c * dq[i] : 0.0;
    }
}

GridField quantum_hydro_rhs(const GridField& v, const GridField& rho, const StochasticLagrangian& lagrangian) {
    lagrangian.validate();
    require_same_grid(v.grid(), rho.grid(), "quantum_hydro_rhs");
    const std::size_t n = v.size();
    const auto mask = floor_mask(rho);
    std::vector<double> s(n, 0.0);
    std::vector<std::uint8_t> ok(n);
    for (std::size_t i = 0; i < n; ++i) {
        ok[i] = mask[i] && v.valid(i);
        if (ok[i]) s[i] = std::log(rho[i]);
    }
    std::vector<double> out(n);
    std::vector<std::uint8_t> out_ok;
    detail::hydro_acceleration(v.grid(), s, v.values(), ok, lagrangian, out, out_ok);
    return GridField(v.grid(), std::move(out), std::move(out_ok), v.time() ? v.time() : rho.time());
}

}  // namespace svm
