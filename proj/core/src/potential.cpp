#include "svm/potential.hpp"

#include <string>

namespace svm {

PotentialSpec PotentialSpec::free() {
    return {[](double) { return 0.0; }, [](double) { return 0.0; }, "free", true};
}

PotentialSpec PotentialSpec::harmonic(double omega, double mass) {
    const double k = mass * omega * omega;
    return {[k](double x) { return 0.5 * k * x * x; }, [k](double x) { return k * x; },
            "harmonic(omega=" + std::to_string(omega) + ")", omega == 0.0};
}

PotentialSpec PotentialSpec::double_well(double a, double b) {
    return {[a, b](double x) { return a * x * x * x * x - b * x * x; },
            [a, b](double x) { return 4.0 * a * x * x * x - 2.0 * b * x; }, "double_well", a == 0.0 && b == 0.0};
}

PotentialSpec PotentialSpec::polynomial(std::vector<double> c) {
    bool constant = true;
    for (std::size_t k = 1; k < c.size(); ++k) constant = constant && c[k] == 0.0;
    auto value = [c](double x) {
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
        return acc;
    };
    auto gradient = [c](double x) {
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * c[k];
        return acc;
    };
    return {value, gradient, "polynomial", constant};
}

}  // namespace svm
