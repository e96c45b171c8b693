#pragma once

#include "svm/grid.hpp"
#include "svm/sde.hpp"
#include "svm/time_grid.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace svm {

/// Pre-point sum  sum_i W_i (W_{i+1} - W_i).  Needs >= 2 points and W_0 = 0.
[[nodiscard]] double ito_integral(std::span<const double> w);
/// Midpoint sum  sum_i (W_i + W_{i+1})/2 (W_{i+1} - W_i).
[[nodiscard]] double stratonovich_integral(std::span<const double> w);

/// A functional X(t, W_t) of a one-dimensional Wiener process together with its
/// mean forward and backward derivatives, supplied analytically.
struct ProcessFunctional {
    std::function<double(double t, double w)> value;
    std::function<double(double t, double w)> forward_derivative;
    std::function<double(double t, double w)> backward_derivative;

    /// X = W:  D W = 0,  D~ W = W / t  (taken as 0 at t = 0 where W_0 = 0).
    static ProcessFunctional wiener();
    /// X = t:  D t = D~ t = 1.
    static ProcessFunctional time();
    static ProcessFunctional constant(double c);
};

struct PartialIntegrationResult {
    /// Sample mean of  sum_j [ (DX)_j Y_j + X_j (D~Y)_j ] dt  -  (X_n Y_n - X_0 Y_0).
    double residual = 0.0;
    double std_error = 0.0;
    double integral_term = 0.0;
    double boundary_term = 0.0;
    std::size_t n_paths = 0;
};

/// Monte-Carlo check of  int E[(DX)Y] dt + int E[X (D~Y)] dt = E[XY]|_a^b
/// with a left-point quadrature of the time integral (first order in dt).
[[nodiscard]] PartialIntegrationResult verify_partial_integration(const ProcessFunctional& x,
                                                                  const ProcessFunctional& y, const TimeGrid& grid,
                                                                  std::size_t n_paths, std::uint64_t seed,
                                                                  unsigned threads = 1);

/// (d_t + u d_x + nu d_xx) g  for Direction::forward,
/// (d_t + u~ d_x - nu d_xx) g for Direction::backward.
/// `g` and `drift` are snapshot series on a common grid and time base;
/// time derivatives use the snapshot stencil of fd::time_derivative.
[[nodiscard]] FieldSeries apply_ito_generator(const FieldSeries& g, const FieldSeries& drift, double nu,
                                              Direction direction);

/// Single-snapshot form: the field is treated as time independent.
[[nodiscard]] GridField apply_ito_generator(const GridField& g, const GridField& drift, double nu,
                                            Direction direction);

}  // namespace svm
