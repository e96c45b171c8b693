#include "svm/wavefunction.hpp"

#include "svm/errors.hpp"

#include <cmath>
#include <string>

namespace svm {

double trapezoidal_norm(const Grid1D& grid, std::span<const Complex> values) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += grid.weight(i) * std::norm(values[i]);
    return sum;
}

WaveFunction::WaveFunction(Grid1D grid, std::vector<Complex> values, double hbar, double mass,
                           std::optional<double> time)
    : grid_(grid), values_(std::move(values)), hbar_(hbar), mass_(mass), time_(time) {
    grid_.validate();
    if (values_.size() != grid_.size()) throw InvalidArgument("WaveFunction: value count does not match grid");
    if (!(hbar_ > 0.0) || !(mass_ > 0.0)) throw InvalidArgument("WaveFunction: hbar and mass must be > 0");
    for (const Complex& c : values_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw InvalidArgument("WaveFunction: non-finite value");
    const double n = norm();
    if (std::abs(n - 1.0) > norm_tolerance)
        throw InvalidArgument("WaveFunction: norm " + std::to_string(n) + " is not 1");
}

WaveFunction WaveFunction::normalized(Grid1D grid, std::vector<Complex> values, double hbar, double mass,
                                      std::optional<double> time) {
    grid.validate();
    if (values.size() != grid.size()) throw InvalidArgument("WaveFunction: value count does not match grid");
    const double n = trapezoidal_norm(grid, values);
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("WaveFunction: cannot normalise zero state");
    const double s = 1.0 / std::sqrt(n);
    for (Complex& c : values) c *= s;
    return WaveFunction(grid, std::move(values), hbar, mass, time);
}

double WaveFunction::norm() const { return trapezoidal_norm(grid_, values_); }

GridField WaveFunction::density() const {
    std::vector<double> rho(values_.size());
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::norm(values_[i]);
    return GridField(grid_, std::move(rho), time_);
}

}  // namespace svm
