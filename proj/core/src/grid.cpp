#include "svm/grid.hpp"

#include "svm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace svm {

std::vector<double> Grid1D::nodes() const {
    std::vector<double> xs(size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = x(i);
    return xs;
}

double Grid1D::weight(std::size_t i) const noexcept {
    if (!periodic && (i == 0 || i == n_cells)) return 0.5 * dx();
    return dx();
}

double Grid1D::integrate(std::span<const double> values) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += weight(i) * values[i];
    return sum;
}

void Grid1D::validate() const {
    if (n_cells < 2) throw InvalidArgument("grid: n_cells must be >= 2");
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min))
        throw InvalidArgument("grid: need finite x_max > x_min");
}

void require_same_grid(const Grid1D& a, const Grid1D& b, const char* context) {
    if (!(a == b)) throw InvalidArgument(std::string(context) + ": grid mismatch");
}

GridField::GridField(Grid1D grid, std::vector<double> values, std::optional<double> time)
    : grid_(grid), values_(std::move(values)), time_(time) {
    if (values_.size() != grid_.size()) throw InvalidArgument("GridField: value count does not match grid");
}

GridField::GridField(Grid1D grid, std::vector<double> values, std::vector<std::uint8_t> valid,
                     std::optional<double> time)
    : grid_(grid), values_(std::move(values)), valid_(std::move(valid)), time_(time) {
    if (values_.size() != grid_.size()) throw InvalidArgument("GridField: value count does not match grid");
    if (!valid_.empty() && valid_.size() != values_.size())
        throw InvalidArgument("GridField: mask size does not match grid");
    if (fully_valid()) valid_.clear();
}

bool GridField::fully_valid() const noexcept {
    return std::all_of(valid_.begin(), valid_.end(), [](std::uint8_t v) { return v != 0; });
}

std::size_t GridField::masked_count() const noexcept {
    return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), std::uint8_t{0}));
}

std::vector<std::uint8_t> GridField::mask() const {
    if (valid_.empty()) return std::vector<std::uint8_t>(values_.size(), 1);
    return valid_;
}

double GridField::interpolate(double x) const noexcept {
    const std::size_t n = values_.size();
    const double dx = grid_.dx();
    double s = (x - grid_.x_min) / dx;
    if (grid_.periodic) {
        const double len = static_cast<double>(grid_.n_cells);
        s = std::fmod(s, len);
        if (s < 0.0) s += len;
        auto i = static_cast<std::size_t>(s);
        if (i >= n) i = n - 1;
        const double w = s - static_cast<double>(i);
        const std::size_t j = (i + 1) % n;
        return (1.0 - w) * values_[i] + w * values_[j];
    }
    if (s <= 0.0) return values_.front();
    if (s >= static_cast<double>(n - 1)) return values_.back();
    const auto i = static_cast<std::size_t>(s);
    const double w = s - static_cast<double>(i);
    return (1.0 - w) * values_[i] + w * values_[i + 1];
}

GridField GridField::filled() const {
    if (valid_.empty()) return *this;
    const std::size_t n = values_.size();
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> left(n, none);
    std::vector<std::size_t> right(n, none);
    for (std::size_t i = 0, last = none; i < n; ++i) {
        if (valid(i)) last = i;
        left[i] = last;
    }
    for (std::size_t i = n, last = none; i-- > 0;) {
        if (valid(i)) last = i;
        right[i] = last;
    }
    std::vector<double> out(values_);
    for (std::size_t i = 0; i < n; ++i) {
        if (valid(i)) continue;
        std::size_t pick = left[i];
        if (pick == none || (right[i] != none && right[i] - i < i - pick)) pick = right[i];
        out[i] = pick == none ? 0.0 : values_[pick];
    }
    return GridField(grid_, std::move(out), time_);
}

std::vector<double> FieldSeries::times() const {
    std::vector<double> ts;
    ts.reserve(snapshots.size());
    for (const auto& s : snapshots) ts.push_back(s.time().value_or(0.0));
    return ts;
}

double FieldSeries::interpolate(double x, double t) const {
    if (snapshots.empty()) throw InvalidArgument("FieldSeries::interpolate on empty series");
    const std::size_t n = snapshots.size();
    if (n == 1) return snapshots[0].interpolate(x);
    const double t0 = snapshots.front().time().value_or(0.0);
    const double t1 = snapshots.back().time().value_or(0.0);
    const bool increasing = t1 > t0;
    // Snapshots are close to uniform in time; locate by arithmetic then correct.
    const double span = t1 - t0;
    double s = (t - t0) / span * static_cast<double>(n - 1);
    if (s <= 0.0) return snapshots.front().interpolate(x);
    if (s >= static_cast<double>(n - 1)) return snapshots.back().interpolate(x);
    auto i = static_cast<std::size_t>(s);
    auto at = [&](std::size_t k) { return snapshots[k].time().value_or(0.0); };
    auto before = [&](double a, double b) { return increasing ? a <= b : a >= b; };
    while (i > 0 && !before(at(i), t)) --i;
    while (i + 2 < n && before(at(i + 1), t)) ++i;
    const double ta = at(i);
    const double tb = at(i + 1);
    const double w = (t - ta) / (tb - ta);
    return (1.0 - w) * snapshots[i].interpolate(x) + w * snapshots[i + 1].interpolate(x);
}

}  // namespace svm
