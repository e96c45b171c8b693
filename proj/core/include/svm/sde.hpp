#pragma once

#include "svm/rng.hpp"
#include "svm/time_grid.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace svm {

enum class Direction { forward, backward };

/// Velocity field (position, time) -> velocity. `evaluate` writes dim components.
struct DriftSpec {
    using Evaluator = std::function<void(std::span<const double> x, double t, std::span<double> out)>;

    std::size_t dim = 1;
    Evaluator evaluate;
    std::string label;

    /// One-dimensional convenience wrapper around f(x, t).
    static DriftSpec scalar(std::function<double(double, double)> f, std::string label = {});
    static DriftSpec zero(std::size_t dim = 1);
    static DriftSpec constant(double c);

    [[nodiscard]] double operator()(double x, double t) const;
};

/// Initial (or final) condition sampler. Receives the path index and ensemble
/// size so stratified samplers are possible; must draw only from `rng`.
using PointSampler = std::function<void(std::size_t path, std::size_t n_paths, Engine& rng, std::span<double> out)>;

[[nodiscard]] PointSampler point_sampler(std::vector<double> x0);
[[nodiscard]] PointSampler gaussian_sampler(double mean, double std_dev);
/// Inverse-CDF sampling at the stratum midpoint (path + U)/n_paths of N(mean, sd^2).
[[nodiscard]] PointSampler stratified_gaussian_sampler(double mean, double std_dev);

/// Trajectories of one process on a shared recording grid, [path][point][component].
class PathEnsemble {
public:
    PathEnsemble(TimeGrid grid, std::size_t dim, std::size_t n_paths, Direction direction, std::uint64_t seed);

    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t n_paths() const noexcept { return n_paths_; }
    [[nodiscard]] Direction direction() const noexcept { return direction_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    [[nodiscard]] double position(std::size_t path, std::size_t point, std::size_t component = 0) const noexcept {
        return positions_[(path * grid_.n_points() + point) * dim_ + component];
    }
    [[nodiscard]] std::span<const double> point(std::size_t path, std::size_t point) const noexcept {
        return {positions_.data() + (path * grid_.n_points() + point) * dim_, dim_};
    }
    [[nodiscard]] std::span<double> mutable_point(std::size_t path, std::size_t point) noexcept {
        return {positions_.data() + (path * grid_.n_points() + point) * dim_, dim_};
    }
    /// All paths' `component` at grid point `point`, in path order.
    [[nodiscard]] std::vector<double> slice(std::size_t point, std::size_t component = 0) const;
    [[nodiscard]] std::span<const double> raw() const noexcept { return positions_; }

private:
    TimeGrid grid_;
    std::size_t dim_;
    std::size_t n_paths_;
    Direction direction_;
    std::uint64_t seed_;
    std::vector<double> positions_;
};

struct IntegrationOptions {
    /// Euler-Maruyama steps per recording interval of the ensemble grid.
    std::size_t substeps = 1;
    /// Worker threads; results do not depend on this.
    unsigned threads = 1;
};

/// Forward SDE dr = u(r,t) dt + sqrt(2 nu) dW, Euler-Maruyama with pre-point drift.
[[nodiscard]] PathEnsemble integrate_forward(const DriftSpec& drift, double nu, const PointSampler& initial,
                                             const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                                             const IntegrationOptions& options = {});

/// Backward SDE dr = u~(r,t) dt + sqrt(2 nu) dW with dt < 0, integrated from
/// grid.t_end() down to grid.t_start() with fresh increments of variance |dt|.
[[nodiscard]] PathEnsemble integrate_backward(const DriftSpec& drift_tilde, double nu, const PointSampler& final_state,
                                              const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                                              const IntegrationOptions& options = {});

}  // namespace svm
