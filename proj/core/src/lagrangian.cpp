#include "svm/lagrangian.hpp"

#include "svm/errors.hpp"

#include <cmath>

namespace svm {

double StochasticLagrangian::kinetic(double a, double b) const noexcept {
    return 0.5 * mass * (b_plus() * (a_plus() * a * a + a_minus() * b * b) + b_minus() * a * b);
}

double StochasticLagrangian::operator()(double r, double a, double b) const { return kinetic(a, b) - potential(r); }

double StochasticLagrangian::classical_inertia() const noexcept {
    // d/da of (dK/da + dK/db) along a = b.
    return 0.5 * mass * (2.0 * b_plus() * a_plus() + 2.0 * b_plus() * a_minus() + 2.0 * b_minus());
}

void StochasticLagrangian::validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidArgument("lagrangian: mass must be > 0");
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument("lagrangian: nu must be >= 0");
    if (!potential.value || !potential.gradient) throw InvalidArgument("lagrangian: potential is incomplete");
}

void StochasticLagrangian::require_time_reversible() const {
    if (alpha1 != 0.0)
        throw UnsupportedBranch("alpha1 != 0 (time-irreversible kinetic form) is not supported by residual operators");
}

namespace {

// p = M (a, b) with M = m [[2 B+ A+, B-], [B-, 2 B+ A-]].
struct MomentumMap {
    double m11, m12, m22;
};

MomentumMap momentum_map(const StochasticLagrangian& l) {
    return {l.mass * 2.0 * l.b_plus() * l.a_plus(), l.mass * l.b_minus(), l.mass * 2.0 * l.b_plus() * l.a_minus()};
}

std::pair<double, double> velocities(const CanonicalState& s, const StochasticLagrangian& l) {
    const MomentumMap M = momentum_map(l);
    const double det = M.m11 * M.m22 - M.m12 * M.m12;
    if (std::abs(det) < 1e-300) throw InvalidArgument("Legendre transform is singular for this kinetic form");
    return {(M.m22 * s.p - M.m12 * s.p_bar) / det, (M.m11 * s.p_bar - M.m12 * s.p) / det};
}

}  // namespace

CanonicalState canonical_state(const StochasticLagrangian& l, double r, double a, double b) {
    const MomentumMap M = momentum_map(l);
    return {r, M.m11 * a + M.m12 * b, M.m12 * a + M.m22 * b};
}

double hamiltonian_eval(const CanonicalState& s, const StochasticLagrangian& l) {
    const auto [a, b] = velocities(s, l);
    return 0.5 * (s.p * a + s.p_bar * b) - l(s.r, a, b);
}

MomentumGradient hamiltonian_momentum_gradient(const CanonicalState& s, const StochasticLagrangian& l) {
    const auto [a, b] = velocities(s, l);
    return {0.5 * a, 0.5 * b};
}

double hamiltonian_position_gradient(const CanonicalState& s, const StochasticLagrangian& l) {
    return l.potential.gradient(s.r);
}

}  // namespace svm
