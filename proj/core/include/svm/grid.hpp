#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace svm {

/// Uniform one-dimensional node layout.
///
/// Non-periodic grids carry n_cells + 1 nodes including both end points.
/// Periodic grids carry n_cells nodes; x_max is identified with x_min.
struct Grid1D {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t n_cells = 1;
    bool periodic = false;

    [[nodiscard]] std::size_t size() const noexcept { return periodic ? n_cells : n_cells + 1; }
    [[nodiscard]] double dx() const noexcept { return (x_max - x_min) / static_cast<double>(n_cells); }
    [[nodiscard]] double x(std::size_t i) const noexcept { return x_min + static_cast<double>(i) * dx(); }
    [[nodiscard]] std::vector<double> nodes() const;

    /// Trapezoidal quadrature weights (all dx on periodic grids).
    [[nodiscard]] double weight(std::size_t i) const noexcept;
    [[nodiscard]] double integrate(std::span<const double> values) const;

    /// Throws InvalidArgument unless n_cells >= 2 and x_max > x_min.
    void validate() const;

    friend bool operator==(const Grid1D&, const Grid1D&) = default;
};

/// Scalar field sampled on a Grid1D. Nodes may be masked (excluded from
/// derivatives and norms); an empty mask means every node is valid.
class GridField {
public:
    GridField() = default;
    GridField(Grid1D grid, std::vector<double> values, std::optional<double> time = std::nullopt);
    GridField(Grid1D grid, std::vector<double> values, std::vector<std::uint8_t> valid,
              std::optional<double> time = std::nullopt);

    template <class F>
    static GridField from_function(const Grid1D& grid, F&& f, std::optional<double> time = std::nullopt) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.x(i));
        return GridField(grid, std::move(v), time);
    }

    [[nodiscard]] const Grid1D& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::vector<double>& mutable_values() noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] std::optional<double> time() const noexcept { return time_; }
    void set_time(std::optional<double> t) noexcept { time_ = t; }

    [[nodiscard]] bool valid(std::size_t i) const noexcept { return valid_.empty() || valid_[i] != 0; }
    [[nodiscard]] bool fully_valid() const noexcept;
    [[nodiscard]] std::size_t masked_count() const noexcept;
    /// Per-node validity flags (size() entries, even when nothing is masked).
    [[nodiscard]] std::vector<std::uint8_t> mask() const;

    /// Linear interpolation; periodic grids wrap, others clamp to the end nodes.
    [[nodiscard]] double interpolate(double x) const noexcept;

    /// Masked nodes replaced by the nearest valid value; the result is fully valid.
    [[nodiscard]] GridField filled() const;

    [[nodiscard]] double integral() const { return grid_.integrate(values_); }

private:
    Grid1D grid_{};
    std::vector<double> values_;
    std::vector<std::uint8_t> valid_;
    std::optional<double> time_;
};

/// Snapshots of a field at increasing (or, for backward solves, decreasing) times.
struct FieldSeries {
    std::vector<GridField> snapshots;

    [[nodiscard]] std::size_t size() const noexcept { return snapshots.size(); }
    [[nodiscard]] bool empty() const noexcept { return snapshots.empty(); }
    [[nodiscard]] const GridField& operator[](std::size_t i) const { return snapshots[i]; }
    [[nodiscard]] std::vector<double> times() const;

    /// Bilinear interpolation in (x, t); t outside the series clamps to the end snapshot.
    /// Requires strictly monotone snapshot times and identical grids.
    [[nodiscard]] double interpolate(double x, double t) const;
};

/// Throws InvalidArgument when two grids differ.
void require_same_grid(const Grid1D& a, const Grid1D& b, const char* context);

}  // namespace svm
