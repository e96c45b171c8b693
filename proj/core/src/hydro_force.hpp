#pragma once

#include "svm/grid.hpp"
#include "svm/lagrangian.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace svm::detail {

/// -v v' - V'/m + 2 nu^2 d_x( s''/2 + s'^2/4 ) with s = ln rho, on valid nodes.
void hydro_acceleration(const Grid1D& grid, std::span<const double> log_rho, std::span<const double> v,
                        std::span<const std::uint8_t> valid, const StochasticLagrangian& lagrangian,
                        std::span<double> out, std::vector<std::uint8_t>& out_valid);

}  // namespace svm::detail
