#pragma once

#include "svm/density.hpp"
#include "svm/grid.hpp"
#include "svm/sde.hpp"
#include "svm/wavefunction.hpp"

namespace svm {

/// u~ = u - 2 nu grad ln rho. Nodes where rho is below the density floor are masked.
[[nodiscard]] GridField consistency_transform(const GridField& u, const DensityEstimate& rho, double nu);

/// v = (u + u~) / 2 nodewise; a node is valid only if valid in both inputs.
[[nodiscard]] GridField mean_velocity(const GridField& u, const GridField& u_tilde);

/// nu grad ln rho with floor masking: the osmotic part separating u and u~ from v.
[[nodiscard]] GridField osmotic_velocity(const DensityEstimate& rho, double nu);

struct DriftTriple {
    GridField u;
    GridField u_tilde;
    GridField v;
    DensityEstimate rho;
};

/// rho = |psi|^2, v = 2 nu grad theta, u = v + nu grad ln rho, u~ = v - nu grad ln rho.
/// Throws NodeDetected if psi vanishes or flips phase inside the domain.
[[nodiscard]] DriftTriple drifts_from_wavefunction(const WaveFunction& psi, double nu);

/// Static drift interpolated from a field; masked nodes take the nearest valid value.
[[nodiscard]] DriftSpec drift_from_field(const GridField& field, std::string label = {});
/// Time-dependent drift interpolated bilinearly across a snapshot series.
[[nodiscard]] DriftSpec drift_from_series(const FieldSeries& series, std::string label = {});

}  // namespace svm
