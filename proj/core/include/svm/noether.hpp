#pragma once

#include "svm/grid.hpp"
#include "svm/lagrangian.hpp"
#include "svm/potential.hpp"
#include "svm/sde.hpp"

#include <optional>
#include <string>
#include <vector>

namespace svm {

struct NoetherCharge {
    std::string label;
    double value = 0.0;
    std::optional<double> time;
};

/// P = m int rho v dx. Masked velocity nodes contribute nothing.
[[nodiscard]] NoetherCharge noether_momentum(const GridField& rho, const GridField& v, double mass);

struct EhrenfestSample {
    double t = 0.0;
    double momentum = 0.0;
    double momentum_rate = 0.0;
    /// -int rho dV/dx dx.
    double mean_force = 0.0;
};

/// dP/dt by central differences of the momentum series against the mean force.
/// Needs >= 3 snapshots.
[[nodiscard]] std::vector<EhrenfestSample> ehrenfest_check(const FieldSeries& rho, const FieldSeries& v,
                                                           const PotentialSpec& potential, double mass);

/// <H> = int rho H(x, m u, m u~) dx.
[[nodiscard]] double mean_hamiltonian(const GridField& u, const GridField& u_tilde, const GridField& rho,
                                      const StochasticLagrangian& lagrangian);

struct SampledMean {
    double value = 0.0;
    double std_error = 0.0;
};

/// Sample mean of H(r, m u(r), m u~(r)) over an ensemble grid point.
[[nodiscard]] SampledMean ensemble_mean_hamiltonian(const PathEnsemble& ensemble, std::size_t point,
                                                    const GridField& u, const GridField& u_tilde,
                                                    const StochasticLagrangian& lagrangian);

}  // namespace svm
