#include "svm/estimators.hpp"

#include "svm/errors.hpp"

#include <cmath>

namespace svm {
namespace {

MeanDerivative conditional_difference(const PathEnsemble& ens, std::span<const double> x, std::size_t point,
                                      std::size_t other, double bin_width, double dt_signed) {
    const std::size_t dim = ens.dim();
    if (x.size() != dim) throw InvalidArgument("mean derivative: bin centre has wrong dimension");
    if (!(bin_width > 0.0)) throw InvalidArgument("mean derivative: bin_width must be > 0");
    const double half = 0.5 * bin_width;

    MeanDerivative out;
    std::vector<double> sum(dim, 0.0);
    std::vector<double> sum_sq(dim, 0.0);
    for (std::size_t p = 0; p < ens.n_paths(); ++p) {
        const auto r = ens.point(p, point);
        bool inside = true;
        for (std::size_t c = 0; c < dim && inside; ++c) inside = std::abs(r[c] - x[c]) <= half;
        if (!inside) continue;
        const auto q = ens.point(p, other);
        for (std::size_t c = 0; c < dim; ++c) {
            const double d = (q[c] - r[c]) / dt_signed;
            sum[c] += d;
            sum_sq[c] += d * d;
        }
        ++out.count;
    }
    if (out.count == 0) throw InsufficientSamples("mean derivative: no samples in bin");
    const double n = static_cast<double>(out.count);
    out.value.resize(dim);
    out.std_error.resize(dim);
    for (std::size_t c = 0; c < dim; ++c) {
        const double mean = sum[c] / n;
        out.value[c] = mean;
        const double var = out.count > 1 ? std::max(0.0, (sum_sq[c] - n * mean * mean) / (n - 1.0)) : 0.0;
        out.std_error[c] = std::sqrt(var / n);
    }
    return out;
}

}  // namespace

MeanDerivative mean_forward_derivative(const PathEnsemble& ensemble, std::span<const double> x, std::size_t point,
                                       double bin_width) {
    if (point >= ensemble.grid().n_steps())
        throw InvalidArgument("mean_forward_derivative: point must precede the last grid point");
    return conditional_difference(ensemble, x, point, point + 1, bin_width, ensemble.grid().dt());
}

MeanDerivative mean_backward_derivative(const PathEnsemble& ensemble, std::span<const double> x, std::size_t point,
                                        double bin_width) {
    if (point == 0 || point > ensemble.grid().n_steps())
        throw InvalidArgument("mean_backward_derivative: point must follow the first grid point");
    // (r(t) - r(t - dt)) / dt  ==  (r(t - dt) - r(t)) / (-dt)
    return conditional_difference(ensemble, x, point, point - 1, bin_width, -ensemble.grid().dt());
}

}  // namespace svm
