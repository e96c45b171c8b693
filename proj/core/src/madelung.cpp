#include "svm/madelung.hpp"

#include "svm/errors.hpp"
#include "svm/finite_difference.hpp"

#include <algorithm>
#include <cmath>

namespace svm {
namespace {

std::vector<std::uint8_t> density_mask(std::span<const double> rho) {
    const double peak = *std::max_element(rho.begin(), rho.end());
    std::vector<std::uint8_t> ok(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) ok[i] = rho[i] >= density_floor * peak && rho[i] > 0.0;
    return ok;
}

// Interior zeros: masked stretches away from the ends, or a phase jump above
// pi/2 between neighbouring nodes (a sign flip the grid straddles).
void detect_nodes(const WaveFunction& psi, const std::vector<std::uint8_t>& ok) {
    const Grid1D& g = psi.grid();
    const std::size_t n = psi.size();
    std::vector<double> crossings;
    std::size_t i = 0;
    while (i < n) {
        if (ok[i]) {
            ++i;
            continue;
        }
        const std::size_t b = i;
        while (i < n && !ok[i]) ++i;
        const bool touches_end = !g.periodic && (b == 0 || i == n);
        const bool everything = b == 0 && i == n;
        if (!touches_end && !everything) crossings.push_back(0.5 * (g.x(b) + g.x(i - 1)));
    }
    const std::size_t pairs = g.periodic ? n : n - 1;
    for (std::size_t k = 0; k < pairs; ++k) {
        const std::size_t j = (k + 1) % n;
        if (!ok[k] || !ok[j]) continue;
        const Complex a = psi[k];
        const Complex b = psi[j];
        if (std::abs(std::arg(b * std::conj(a))) > 0.5 * 3.14159265358979323846) {
            const Complex d = a - b;
            const double s = std::clamp(std::real(a * std::conj(d)) / std::norm(d), 0.0, 1.0);
            crossings.push_back(g.x(k) + s * g.dx());
        }
    }
    if (!crossings.empty()) {
        std::sort(crossings.begin(), crossings.end());
        throw NodeDetected(std::move(crossings));
    }
}

}  // namespace

MadelungFields madelung_decompose(const WaveFunction& psi) {
    const Grid1D& g = psi.grid();
    const std::size_t n = psi.size();
    GridField rho_field = psi.density();
    const auto ok = density_mask(rho_field.values());
    detect_nodes(psi, ok);

    // Local phase increments; their running sum is the unwrapped phase.
    std::vector<double> dphase(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = (k + 1) % n;
        if (!g.periodic && k + 1 == n) break;
        dphase[k] = ok[k] && ok[j] ? std::arg(psi[j] * std::conj(psi[k])) : 0.0;
    }
    std::vector<double> theta(n, 0.0);
    const auto first = static_cast<std::size_t>(std::find(ok.begin(), ok.end(), std::uint8_t{1}) - ok.begin());
    if (first == n) throw InvalidArgument("madelung_decompose: density vanishes everywhere");
    theta[first] = std::arg(psi[first]);
    for (std::size_t k = first; k + 1 < n; ++k) theta[k + 1] = theta[k] + dphase[k];
    for (std::size_t k = first; k-- > 0;) theta[k] = theta[k + 1] - dphase[k];

    const double nu = psi.nu();
    std::vector<double> v(n, 0.0);
    std::vector<std::uint8_t> v_ok;
    if (g.periodic && std::all_of(ok.begin(), ok.end(), [](std::uint8_t x) { return x != 0; })) {
        for (std::size_t k = 0; k < n; ++k) v[k] = 2.0 * nu * (dphase[k] + dphase[(k + n - 1) % n]) / (2.0 * g.dx());
        v_ok.assign(n, 1);
    } else {
        fd::gradient(theta, g.dx(), false, ok, v, v_ok);
        for (double& x : v) x *= 2.0 * nu;
    }

    MadelungFields out{DensityEstimate{rho_field, 0, 0.0}, GridField(g, std::move(theta), ok, psi.time()),
                       GridField(g, std::move(v), std::move(v_ok), psi.time())};
    return out;
}

WaveFunction madelung_compose(const DensityEstimate& rho, const GridField& theta, double hbar, double mass) {
    require_same_grid(rho.grid(), theta.grid(), "madelung_compose");
    std::vector<Complex> psi(rho.base.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (rho[i] < 0.0) throw InvalidArgument("madelung_compose: negative density");
        psi[i] = std::polar(std::sqrt(rho[i]), theta[i]);
    }
    return WaveFunction::normalized(rho.grid(), std::move(psi), hbar, mass, rho.time());
}

}  // namespace svm
