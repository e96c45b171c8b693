#pragma once

#include "svm/potential.hpp"

namespace svm {

/// Stochastic Lagrangian with the general quadratic kinetic form
///   (m/2) [ B+ { A+ (Dr)^2 + A- (D~r)^2 } + B- (Dr)(D~r) ] - V(r),
/// A+- = 1/2 +- alpha1, B+- = 1/2 +- alpha2. The defaults (0, 1/2) give the
/// time-symmetric (m/4)((Dr)^2 + (D~r)^2).
struct StochasticLagrangian {
    double mass = 1.0;
    PotentialSpec potential = PotentialSpec::free();
    double nu = 0.5;
    double alpha1 = 0.0;
    double alpha2 = 0.5;

    [[nodiscard]] double a_plus() const noexcept { return 0.5 + alpha1; }
    [[nodiscard]] double a_minus() const noexcept { return 0.5 - alpha1; }
    [[nodiscard]] double b_plus() const noexcept { return 0.5 + alpha2; }
    [[nodiscard]] double b_minus() const noexcept { return 0.5 - alpha2; }

    [[nodiscard]] double kinetic(double forward_velocity, double backward_velocity) const noexcept;
    [[nodiscard]] double operator()(double r, double forward_velocity, double backward_velocity) const;

    /// Inertia of the nu -> 0 limit where Dr = D~r: d/dt of the summed momenta
    /// is (inertia) * r''. Equals m for every (alpha1, alpha2).
    [[nodiscard]] double classical_inertia() const noexcept;

    /// Throws InvalidArgument on m <= 0 or nu < 0.
    void validate() const;
    /// Throws UnsupportedBranch unless alpha1 == 0.
    void require_time_reversible() const;
};

/// (r, p, p_bar) with p/2 = dL/dDr and p_bar/2 = dL/dD~r.
struct CanonicalState {
    double r = 0.0;
    double p = 0.0;
    double p_bar = 0.0;
};

/// Momenta (p, p_bar) for given mean derivatives.
[[nodiscard]] CanonicalState canonical_state(const StochasticLagrangian& lagrangian, double r, double forward_velocity,
                                             double backward_velocity);

/// Legendre transform H = (p Dr + p_bar D~r)/2 - L, with (Dr, D~r) recovered
/// from the momenta. For the default kinetic form this is (p^2 + p_bar^2)/(4m) + V(r).
[[nodiscard]] double hamiltonian_eval(const CanonicalState& state, const StochasticLagrangian& lagrangian);

/// dH/dp and dH/dp_bar, which equal Dr/2 and D~r/2.
struct MomentumGradient {
    double d_p = 0.0;
    double d_p_bar = 0.0;
};
[[nodiscard]] MomentumGradient hamiltonian_momentum_gradient(const CanonicalState& state,
                                                            const StochasticLagrangian& lagrangian);
/// dH/dr at fixed momenta.
[[nodiscard]] double hamiltonian_position_gradient(const CanonicalState& state, const StochasticLagrangian& lagrangian);

}  // namespace svm
