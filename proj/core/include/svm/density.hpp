#pragma once

#include "svm/grid.hpp"
#include "svm/sde.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace svm {

/// Non-negative density of unit trapezoidal integral on a grid.
struct DensityEstimate {
    GridField base;
    std::size_t n_samples = 0;
    double bandwidth = 0.0;

    [[nodiscard]] const Grid1D& grid() const noexcept { return base.grid(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return base[i]; }
    [[nodiscard]] std::optional<double> time() const noexcept { return base.time(); }

    /// Clips negatives to zero and rescales to unit integral. Throws on zero mass.
    [[nodiscard]] static DensityEstimate from_field(GridField field);
};

using DensitySeries = std::vector<DensityEstimate>;

[[nodiscard]] FieldSeries to_field_series(const DensitySeries& series);

/// Nodes with rho < relative_floor * max(rho) are masked in log-gradient work.
inline constexpr double density_floor = 1e-12;

/// 1.06 sigma n^(-1/5) from the sample standard deviation.
[[nodiscard]] double silverman_bandwidth(std::span<const double> samples);

/// Gaussian-kernel estimate of paths' density at ensemble grid point `point`
/// (first component), renormalised to unit integral on `layout`.
/// `bandwidth` defaults to the Silverman rule.
[[nodiscard]] DensityEstimate estimate_density(const PathEnsemble& ensemble, std::size_t point, const Grid1D& layout,
                                               std::optional<double> bandwidth = std::nullopt);

[[nodiscard]] DensityEstimate estimate_density(std::span<const double> samples, const Grid1D& layout,
                                               std::optional<double> bandwidth = std::nullopt);

/// Integral of |a - b| on the common grid.
[[nodiscard]] double l1_distance(const GridField& a, const GridField& b);
/// sqrt of the integral of (a - b)^2.
[[nodiscard]] double l2_distance(const GridField& a, const GridField& b);

/// Inverse-CDF sampler for a gridded density (piecewise-linear CDF).
[[nodiscard]] PointSampler density_sampler(const DensityEstimate& rho);

}  // namespace svm
