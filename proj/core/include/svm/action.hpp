#pragma once

#include "svm/grid.hpp"
#include "svm/lagrangian.hpp"
#include "svm/sde.hpp"

#include <cstddef>

namespace svm {

struct ActionEstimate {
    double value = 0.0;
    double std_error = 0.0;
    /// (path, point) samples skipped because the fields do not cover them.
    std::size_t masked_samples = 0;
};

/// Trapezoidal-in-time Monte-Carlo estimate of
///   I = int dt E[ L(r, u(r,t), u~(r,t)) ]
/// with the mean derivatives replaced by the drift fields along each path.
/// A single-snapshot series is taken as time independent.
[[nodiscard]] ActionEstimate action_estimate(const StochasticLagrangian& lagrangian, const PathEnsemble& ensemble,
                                             const FieldSeries& u, const FieldSeries& u_tilde);

}  // namespace svm
