#include "svm/wiener.hpp"

#include "parallel.hpp"
#include "svm/errors.hpp"
#include "svm/rng.hpp"

#include <cmath>
#include <random>

namespace svm {

std::vector<double> WienerIncrements::path(std::size_t p, std::size_t component) const {
    std::vector<double> w(grid.n_points(), 0.0);
    for (std::size_t j = 0; j < grid.n_steps(); ++j) w[j + 1] = w[j] + (*this)(p, j, component);
    return w;
}

WienerIncrements sample_wiener(const TimeGrid& grid, std::size_t dim, std::size_t n_paths, std::uint64_t seed,
                               unsigned threads) {
    if (n_paths == 0) throw InvalidArgument("sample_wiener: n_paths must be >= 1");
    if (dim == 0) throw InvalidArgument("sample_wiener: dim must be >= 1");
    WienerIncrements out{grid, dim, n_paths, seed, std::vector<double>(n_paths * grid.n_steps() * dim)};
    const double scale = std::sqrt(std::abs(grid.dt()));
    const std::size_t stride = grid.n_steps() * dim;
    detail::parallel_for(n_paths, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
            Engine rng = path_engine(seed, p, Stream::increments);
            std::normal_distribution<double> normal;
            double* dst = out.increments.data() + p * stride;
            for (std::size_t k = 0; k < stride; ++k) dst[k] = scale * normal(rng);
        }
    });
    return out;
}

}  // namespace svm
