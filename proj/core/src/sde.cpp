#include "svm/sde.hpp"

#include "parallel.hpp"
#include "svm/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <utility>

namespace svm {

DriftSpec DriftSpec::scalar(std::function<double(double, double)> f, std::string label) {
    return DriftSpec{1,
                     [f = std::move(f)](std::span<const double> x, double t, std::span<double> out) {
                         out[0] = f(x[0], t);
                     },
                     std::move(label)};
}

DriftSpec DriftSpec::zero(std::size_t dim) {
    return DriftSpec{dim,
                     [](std::span<const double>, double, std::span<double> out) {
                         for (double& o : out) o = 0.0;
                     },
                     "zero"};
}

DriftSpec DriftSpec::constant(double c) {
    return scalar([c](double, double) { return c; }, "constant");
}

double DriftSpec::operator()(double x, double t) const {
    double in[1] = {x};
    double out[1] = {0.0};
    evaluate(std::span<const double>(in, 1), t, std::span<double>(out, 1));
    return out[0];
}

PointSampler point_sampler(std::vector<double> x0) {
    return [x0 = std::move(x0)](std::size_t, std::size_t, Engine&, std::span<double> out) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = x0[i];
    };
}

PointSampler gaussian_sampler(double mean, double std_dev) {
    return [=](std::size_t, std::size_t, Engine& rng, std::span<double> out) {
        std::normal_distribution<double> normal(mean, std_dev);
        for (double& o : out) o = normal(rng);
    };
}

namespace {

// Acklam's rational approximation refined by one Halley step (|error| ~ 1e-15).
double inverse_normal_cdf(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    double x;
    if (p < 0.02425) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p > 1.0 - 0.02425) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace

PointSampler stratified_gaussian_sampler(double mean, double std_dev) {
    return [=](std::size_t path, std::size_t n_paths, Engine& rng, std::span<double> out) {
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        for (double& o : out) {
            double u = uniform(rng);
            if (u <= 0.0) u = 0.5;
            const double p = (static_cast<double>(path) + u) / static_cast<double>(n_paths);
            o = mean + std_dev * inverse_normal_cdf(p);
        }
    };
}

PathEnsemble::PathEnsemble(TimeGrid grid, std::size_t dim, std::size_t n_paths, Direction direction,
                           std::uint64_t seed)
    : grid_(grid), dim_(dim), n_paths_(n_paths), direction_(direction), seed_(seed),
      positions_(n_paths * grid.n_points() * dim, 0.0) {
    if (n_paths == 0) throw InvalidArgument("PathEnsemble: n_paths must be >= 1");
    if (dim == 0) throw InvalidArgument("PathEnsemble: dim must be >= 1");
}

std::vector<double> PathEnsemble::slice(std::size_t pt, std::size_t component) const {
    std::vector<double> out(n_paths_);
    for (std::size_t p = 0; p < n_paths_; ++p) out[p] = position(p, pt, component);
    return out;
}

namespace {

void check_inputs(const DriftSpec& drift, double nu, const TimeGrid& grid, std::size_t n_paths,
                  const IntegrationOptions& options, const char* who) {
    if (n_paths == 0) throw InvalidArgument(std::string(who) + ": n_paths must be >= 1");
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument(std::string(who) + ": nu must be >= 0");
    if (!drift.evaluate) throw InvalidArgument(std::string(who) + ": drift has no evaluator");
    if (drift.dim == 0) throw InvalidArgument(std::string(who) + ": drift dim must be >= 1");
    if (options.substeps == 0) throw InvalidArgument(std::string(who) + ": substeps must be >= 1");
    (void)grid;
}

PathEnsemble integrate(const DriftSpec& drift, double nu, const PointSampler& boundary, const TimeGrid& grid,
                       std::size_t n_paths, std::uint64_t seed, const IntegrationOptions& options,
                       Direction direction) {
    const std::size_t dim = drift.dim;
    PathEnsemble ens(grid, dim, n_paths, direction, seed);
    const std::size_t n_points = grid.n_points();
    const std::size_t sub = options.substeps;
    const double sign = direction == Direction::forward ? 1.0 : -1.0;
    const double h = sign * grid.dt() / static_cast<double>(sub);
    const double noise = std::sqrt(2.0 * nu * std::abs(h));

    detail::parallel_for(n_paths, options.threads, [&](std::size_t b, std::size_t e) {
        std::vector<double> x(dim);
        std::vector<double> u(dim);
        for (std::size_t p = b; p < e; ++p) {
            Engine init_rng = path_engine(seed, p, Stream::initial);
            boundary(p, n_paths, init_rng, x);
            Engine rng = path_engine(seed, p, Stream::increments);
            std::normal_distribution<double> normal;

            const std::size_t first = direction == Direction::forward ? 0 : n_points - 1;
            auto store = [&](std::size_t pt) {
                auto dst = ens.mutable_point(p, pt);
                for (std::size_t c = 0; c < dim; ++c) dst[c] = x[c];
            };
            for (double xc : x)
                if (!std::isfinite(xc)) throw IntegrationDiverged(0, p);
            store(first);

            for (std::size_t k = 0; k < grid.n_steps(); ++k) {
                // Recording interval k runs from point `from` toward `to`.
                const std::size_t from = direction == Direction::forward ? k : n_points - 1 - k;
                const std::size_t to = direction == Direction::forward ? k + 1 : n_points - 2 - k;
                const double t_from = grid.time(from);
                for (std::size_t s = 0; s < sub; ++s) {
                    const double t = t_from + static_cast<double>(s) * h;
                    drift.evaluate(x, t, u);
                    for (std::size_t c = 0; c < dim; ++c) {
                        x[c] += u[c] * h + noise * normal(rng);
                        if (!std::isfinite(x[c])) throw IntegrationDiverged(k * sub + s + 1, p);
                    }
                }
                store(to);
            }
        }
    });
    return ens;
}

}  // namespace

PathEnsemble integrate_forward(const DriftSpec& drift, double nu, const PointSampler& initial, const TimeGrid& grid,
                               std::size_t n_paths, std::uint64_t seed, const IntegrationOptions& options) {
    check_inputs(drift, nu, grid, n_paths, options, "integrate_forward");
    return integrate(drift, nu, initial, grid, n_paths, seed, options, Direction::forward);
}

PathEnsemble integrate_backward(const DriftSpec& drift_tilde, double nu, const PointSampler& final_state,
                                const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                                const IntegrationOptions& options) {
    check_inputs(drift_tilde, nu, grid, n_paths, options, "integrate_backward");
    return integrate(drift_tilde, nu, final_state, grid, n_paths, seed, options, Direction::backward);
}

}  // namespace svm
