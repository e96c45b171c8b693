#pragma once

#include "svm/grid.hpp"

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace svm {

using Complex = std::complex<double>;

/// Complex field of unit trapezoidal norm, with the hbar and mass that fix nu = hbar / (2 m).
class WaveFunction {
public:
    /// Validates unit norm (1e-8) and finiteness; use `normalized` to rescale.
    WaveFunction(Grid1D grid, std::vector<Complex> values, double hbar, double mass,
                 std::optional<double> time = std::nullopt);

    [[nodiscard]] static WaveFunction normalized(Grid1D grid, std::vector<Complex> values, double hbar, double mass,
                                                 std::optional<double> time = std::nullopt);

    [[nodiscard]] const Grid1D& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const Complex> values() const noexcept { return values_; }
    [[nodiscard]] Complex operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double hbar() const noexcept { return hbar_; }
    [[nodiscard]] double mass() const noexcept { return mass_; }
    [[nodiscard]] double nu() const noexcept { return hbar_ / (2.0 * mass_); }
    [[nodiscard]] std::optional<double> time() const noexcept { return time_; }

    [[nodiscard]] double norm() const;
    [[nodiscard]] GridField density() const;

    static constexpr double norm_tolerance = 1e-8;

private:
    Grid1D grid_;
    std::vector<Complex> values_;
    double hbar_;
    double mass_;
    std::optional<double> time_;
};

[[nodiscard]] double trapezoidal_norm(const Grid1D& grid, std::span<const Complex> values);

}  // namespace svm
