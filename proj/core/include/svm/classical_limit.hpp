#pragma once

#include "svm/lagrangian.hpp"
#include "svm/time_grid.hpp"

#include <cstddef>
#include <vector>

namespace svm {

struct ClassicalTrajectory {
    std::vector<double> t;
    std::vector<double> x;
};

/// Stationary point of the discretised nu = 0 action (Dr = D~r on a smooth path):
/// a Stormer-Verlet recursion with the kinetic form's inertia. Requires nu == 0.
[[nodiscard]] ClassicalTrajectory classical_limit_trajectory(const StochasticLagrangian& lagrangian, double x0,
                                                             double v0, TimeSpan span, std::size_t n_steps);

/// Classical RK4 for m x'' = -V'(x); independent of the variational route.
[[nodiscard]] ClassicalTrajectory newton_rk4(const PotentialSpec& potential, double mass, double x0, double v0,
                                             TimeSpan span, std::size_t n_steps);

struct ClassicalLimitResult {
    double max_deviation = 0.0;
    double final_position = 0.0;
    double oracle_final_position = 0.0;
};

/// Max |x_svm - x_oracle| over the common grid; the oracle is RK4 at the same step.
[[nodiscard]] ClassicalLimitResult classical_limit_compare(const StochasticLagrangian& lagrangian, double x0, double v0,
                                                           TimeSpan span, std::size_t n_steps);

}  // namespace svm
