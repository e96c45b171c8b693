#include "svm/time_grid.hpp"

#include "svm/errors.hpp"

#include <cmath>
#include <string>

namespace svm {

TimeGrid::TimeGrid(double t_start, double t_end, std::size_t n_steps)
    : t_start_(t_start), t_end_(t_end), n_steps_(n_steps) {
    if (n_steps == 0) throw InvalidArgument("TimeGrid: n_steps must be >= 1");
    if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start))
        throw InvalidArgument("TimeGrid: need finite t_end > t_start");
}

double TimeGrid::time(std::size_t j) const noexcept {
    if (j == n_steps_) return t_end_;
    return t_start_ + static_cast<double>(j) * dt();
}

std::size_t TimeGrid::index_of(double t) const {
    const double k = (t - t_start_) / dt();
    const double r = std::round(k);
    if (r < 0.0 || r > static_cast<double>(n_steps_) || std::abs(k - r) > 1e-9)
        throw InvalidArgument("TimeGrid: t = " + std::to_string(t) + " is not a grid point");
    return static_cast<std::size_t>(r);
}

}  // namespace svm
