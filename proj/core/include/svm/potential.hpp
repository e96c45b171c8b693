#pragma once

#include <functional>
#include <string>
#include <vector>

namespace svm {

/// External potential V(x) with its gradient.
struct PotentialSpec {
    std::function<double(double)> value;
    std::function<double(double)> gradient;
    std::string label;
    /// True when V is constant, i.e. the action is translation invariant.
    bool translation_invariant = false;

    [[nodiscard]] double operator()(double x) const { return value(x); }

    static PotentialSpec free();
    /// V = m omega^2 x^2 / 2.
    static PotentialSpec harmonic(double omega, double mass = 1.0);
    /// V = a x^4 - b x^2.
    static PotentialSpec double_well(double a, double b);
    /// V = sum_k c_k x^k.
    static PotentialSpec polynomial(std::vector<double> coefficients);
};

}  // namespace svm
