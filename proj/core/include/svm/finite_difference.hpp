#pragma once

#include "svm/grid.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace svm::fd {

// Second-order central stencils in the interior, second-order one-sided
// stencils at grid ends and at the edges of each contiguous valid run.
// Runs shorter than the stencil width are masked in the output.

[[nodiscard]] GridField gradient(const GridField& f);
[[nodiscard]] GridField laplacian(const GridField& f);

/// Raw-array forms: `valid` may be empty (all valid). Output validity goes to `out_valid`.
void gradient(std::span<const double> f, double dx, bool periodic, std::span<const std::uint8_t> valid,
              std::span<double> out, std::vector<std::uint8_t>& out_valid);
void second_derivative(std::span<const double> f, double dx, bool periodic, std::span<const std::uint8_t> valid,
                       std::span<double> out, std::vector<std::uint8_t>& out_valid);

/// d/dt of node values across a snapshot series: central in the interior,
/// one-sided second order at the ends; a single snapshot yields zero.
[[nodiscard]] FieldSeries time_derivative(const FieldSeries& series);

}  // namespace svm::fd
