#pragma once

#include "svm/density.hpp"
#include "svm/grid.hpp"
#include "svm/sde.hpp"
#include "svm/time_grid.hpp"

#include <cstddef>

namespace svm {

enum class FokkerPlanckScheme {
    /// Flux-form Crank-Nicolson on drift and diffusion together. Second order.
    crank_nicolson,
    /// Explicit upwind advection, implicit diffusion. First order, positivity
    /// preserving; raises StabilityError when the advective CFL bound fails.
    semi_implicit,
};

struct DensitySolverOptions {
    FokkerPlanckScheme scheme = FokkerPlanckScheme::crank_nicolson;
    std::size_t n_steps = 1000;
    std::size_t snapshot_stride = 1;
};

// All solvers use zero-flux (reflecting) ends on non-periodic grids and
// conserve the trapezoidal mass to round-off. Snapshots are returned in
// integration order, including the initial condition.

/// d_t rho = d_x(-u + nu d_x) rho from span.t_start to span.t_end.
[[nodiscard]] DensitySeries solve_fokker_planck_forward(const DriftSpec& u, double nu, const DensityEstimate& rho_initial,
                                                        TimeSpan span, const DensitySolverOptions& options = {});

/// d_t rho = d_x(-u~ - nu d_x) rho from span.t_end down to span.t_start.
[[nodiscard]] DensitySeries solve_fokker_planck_backward(const DriftSpec& u_tilde, double nu,
                                                         const DensityEstimate& rho_final, TimeSpan span,
                                                         const DensitySolverOptions& options = {});

/// d_t rho = -d_x(rho v).
[[nodiscard]] DensitySeries solve_continuity(const DriftSpec& v, const DensityEstimate& rho_initial, TimeSpan span,
                                             const DensitySolverOptions& options = {});
[[nodiscard]] DensitySeries solve_continuity(const FieldSeries& v, const DensityEstimate& rho_initial, TimeSpan span,
                                             const DensitySolverOptions& options = {});

}  // namespace svm
