#pragma once

#include <cstddef>

namespace svm {

/// Uniform partition t_j = t_start + j (t_end - t_start) / n_steps.
class TimeGrid {
public:
    TimeGrid(double t_start, double t_end, std::size_t n_steps);

    [[nodiscard]] double t_start() const noexcept { return t_start_; }
    [[nodiscard]] double t_end() const noexcept { return t_end_; }
    [[nodiscard]] std::size_t n_steps() const noexcept { return n_steps_; }
    [[nodiscard]] std::size_t n_points() const noexcept { return n_steps_ + 1; }
    [[nodiscard]] double dt() const noexcept { return (t_end_ - t_start_) / static_cast<double>(n_steps_); }
    [[nodiscard]] double time(std::size_t j) const noexcept;

    /// Index of the grid point equal to `t` (to 1e-9 dt); throws if `t` is off-grid.
    [[nodiscard]] std::size_t index_of(double t) const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double t_start_;
    double t_end_;
    std::size_t n_steps_;
};

struct TimeSpan {
    double t_start = 0.0;
    double t_end = 1.0;
};

}  // namespace svm
