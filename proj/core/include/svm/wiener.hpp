#pragma once

#include "svm/time_grid.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace svm {

/// Wiener increments dW laid out [path][step][component], each of variance |dt|.
struct WienerIncrements {
    TimeGrid grid;
    std::size_t dim = 1;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    std::vector<double> increments;

    [[nodiscard]] double operator()(std::size_t path, std::size_t step, std::size_t component = 0) const noexcept {
        return increments[(path * grid.n_steps() + step) * dim + component];
    }
    [[nodiscard]] std::span<const double> path_increments(std::size_t path) const noexcept {
        const std::size_t stride = grid.n_steps() * dim;
        return {increments.data() + path * stride, stride};
    }

    /// Cumulative path W_0 = 0, W_{j+1} = W_j + dW_j for one component.
    [[nodiscard]] std::vector<double> path(std::size_t path, std::size_t component = 0) const;
};

/// Draws independent N(0, |dt|) increments. Path p consumes substream (seed, p);
/// the same draws drive integrate_forward with one substep, so both can be coupled.
[[nodiscard]] WienerIncrements sample_wiener(const TimeGrid& grid, std::size_t dim, std::size_t n_paths,
                                             std::uint64_t seed, unsigned threads = 1);

}  // namespace svm
