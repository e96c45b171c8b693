#pragma once

#include "svm/sde.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace svm {

struct MeanDerivative {
    std::vector<double> value;
    std::vector<double> std_error;
    std::size_t count = 0;
};

/// E[(r(t+dt) - r(t))/dt | r(t) in bin], the bin a cube of side `bin_width`
/// centred on `x`. `point` indexes the ensemble grid and must not be the last.
[[nodiscard]] MeanDerivative mean_forward_derivative(const PathEnsemble& ensemble, std::span<const double> x,
                                                     std::size_t point, double bin_width);

/// E[(r(t) - r(t-dt))/dt | r(t) in bin]; `point` must not be the first.
[[nodiscard]] MeanDerivative mean_backward_derivative(const PathEnsemble& ensemble, std::span<const double> x,
                                                      std::size_t point, double bin_width);

}  // namespace svm
