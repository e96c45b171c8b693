#pragma once

#include "svm/density.hpp"
#include "svm/grid.hpp"
#include "svm/wavefunction.hpp"

namespace svm {

struct MadelungFields {
    DensityEstimate rho;
    /// Unwrapped phase, anchored at the leftmost unmasked node.
    GridField theta;
    /// v = 2 nu grad theta.
    GridField v;
};

/// psi = sqrt(rho) e^{i theta}. Throws NodeDetected for interior nodes.
[[nodiscard]] MadelungFields madelung_decompose(const WaveFunction& psi);

/// sqrt(rho) e^{i theta}, renormalised. Throws InvalidArgument on negative rho.
[[nodiscard]] WaveFunction madelung_compose(const DensityEstimate& rho, const GridField& theta, double hbar,
                                            double mass);

}  // namespace svm
