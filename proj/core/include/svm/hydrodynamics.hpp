#pragma once

#include "svm/density.hpp"
#include "svm/grid.hpp"
#include "svm/lagrangian.hpp"
#include "svm/time_grid.hpp"

#include <cstddef>

namespace svm {

struct HydroSeries {
    FieldSeries rho;
    FieldSeries v;
};

/// Coupled continuity + quantum-hydrodynamic evolution of (rho, v) by RK4 in
/// time. Density is carried as ln rho, so the continuity equation reads
/// d_t ln rho = -v d_x ln rho - d_x v; the velocity uses the same force as
/// quantum_hydro_rhs. On open grids only the core where rho >= 1e-10 * peak is
/// evolved; the tails are extrapolated from its edge (ln rho quadratic, v
/// linear). The core of rho_initial must lie above the density floor.
[[nodiscard]] HydroSeries evolve_hydrodynamics(const DensityEstimate& rho_initial, const GridField& v_initial,
                                               const StochasticLagrangian& lagrangian, TimeSpan span,
                                               std::size_t n_steps, std::size_t snapshot_stride = 1);

}  // namespace svm
