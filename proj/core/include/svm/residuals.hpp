#pragma once

#include "svm/grid.hpp"
#include "svm/lagrangian.hpp"

namespace svm {

/// -(m/2) [ (d_t + u~ d_x - nu d_xx) u + (d_t + u d_x + nu d_xx) u~ ] - dV/dx
/// on each snapshot. Nodes below the density floor are masked.
/// Requires alpha1 == 0.
[[nodiscard]] FieldSeries stochastic_el_residual(const FieldSeries& u, const FieldSeries& u_tilde,
                                                 const FieldSeries& rho, const StochasticLagrangian& lagrangian);

/// (1/2) D~p + (1/2) D p_bar + dH/dr with p = m u, p_bar = m u~.
/// Equals minus the Euler-Lagrange residual.
[[nodiscard]] FieldSeries canonical_residual(const FieldSeries& u, const FieldSeries& u_tilde, const FieldSeries& rho,
                                             const StochasticLagrangian& lagrangian);

struct ResidualNorms {
    /// Max |r| over valid nodes with rho >= relative_floor * max(rho).
    double max_norm = 0.0;
    /// sqrt( int rho r^2 dx ) over the same nodes, maximised over snapshots.
    double weighted_l2 = 0.0;
    std::size_t nodes_used = 0;
};

inline constexpr double residual_density_floor = 1e-6;

[[nodiscard]] ResidualNorms residual_norms(const FieldSeries& residual, const FieldSeries& rho,
                                           double relative_floor = residual_density_floor);

/// d_t v = -v d_x v - (1/m) dV/dx + 2 nu^2 d_x( d_xx sqrt(rho) / sqrt(rho) ).
/// The quantum term is evaluated through ln rho. Masked nodes propagate.
[[nodiscard]] GridField quantum_hydro_rhs(const GridField& v, const GridField& rho,
                                          const StochasticLagrangian& lagrangian);

}  // namespace svm
