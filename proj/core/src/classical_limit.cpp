#include "svm/classical_limit.hpp"

#include "svm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace svm {
namespace {

void check_span(TimeSpan span, std::size_t n_steps) {
    if (n_steps == 0) throw InvalidArgument("classical trajectory: n_steps must be > 0");
    if (!(span.t_end > span.t_start)) throw InvalidArgument("classical trajectory: t_end must exceed t_start");
}

}  // namespace

ClassicalTrajectory classical_limit_trajectory(const StochasticLagrangian& lagrangian, double x0, double v0,
                                               TimeSpan span, std::size_t n_steps) {
    lagrangian.validate();
    if (lagrangian.nu != 0.0) throw InvalidArgument("classical_limit_trajectory: requires nu == 0");
    check_span(span, n_steps);
    const double inertia = lagrangian.classical_inertia();
    if (!(inertia > 0.0)) throw InvalidArgument("classical_limit_trajectory: degenerate kinetic form");
    const double h = (span.t_end - span.t_start) / static_cast<double>(n_steps);
    const auto& grad = lagrangian.potential.gradient;

    ClassicalTrajectory tr;
    tr.t.resize(n_steps + 1);
    tr.x.resize(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) tr.t[k] = span.t_start + static_cast<double>(k) * h;
    tr.x[0] = x0;
    // Discrete Lagrangian h L(x_k, dx/h, dx/h); its stationarity condition is
    // inertia (x_{k+1} - 2 x_k + x_{k-1}) / h^2 = -V'(x_k).
    tr.x[1] = x0 + h * v0 - 0.5 * h * h * grad(x0) / inertia;
    for (std::size_t k = 1; k < n_steps; ++k)
        tr.x[k + 1] = 2.0 * tr.x[k] - tr.x[k - 1] - h * h * grad(tr.x[k]) / inertia;
    return tr;
}

ClassicalTrajectory newton_rk4(const PotentialSpec& potential, double mass, double x0, double v0, TimeSpan span,
                               std::size_t n_steps) {
    check_span(span, n_steps);
    if (!(mass > 0.0)) throw InvalidArgument("newton_rk4: mass must be > 0");
    const double h = (span.t_end - span.t_start) / static_cast<double>(n_steps);
    const auto acc = [&](double x) { return -potential.gradient(x) / mass; };
    ClassicalTrajectory tr;
    tr.t.resize(n_steps + 1);
    tr.x.resize(n_steps + 1);
    double x = x0, v = v0;
    tr.t[0] = span.t_start;
    tr.x[0] = x;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double k1x = v, k1v = acc(x);
        const double k2x = v + 0.5 * h * k1v, k2v = acc(x + 0.5 * h * k1x);
        const double k3x = v + 0.5 * h * k2v, k3v = acc(x + 0.5 * h * k2x);
        const double k4x = v + h * k3v, k4v = acc(x + h * k3x);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        tr.t[k + 1] = span.t_start + static_cast<double>(k + 1) * h;
        tr.x[k + 1] = x;
    }
    return tr;
}

ClassicalLimitResult classical_limit_compare(const StochasticLagrangian& lagrangian, double x0, double v0,
                                             TimeSpan span, std::size_t n_steps) {
    const auto svm_path = classical_limit_trajectory(lagrangian, x0, v0, span, n_steps);
    const auto oracle = newton_rk4(lagrangian.potential, lagrangian.mass, x0, v0, span, n_steps);
    ClassicalLimitResult r;
    for (std::size_t k = 0; k <= n_steps; ++k)
        r.max_deviation = std::max(r.max_deviation, std::abs(svm_path.x[k] - oracle.x[k]));
    r.final_position = svm_path.x.back();
    r.oracle_final_position = oracle.x.back();
    return r;
}

}  // namespace svm
