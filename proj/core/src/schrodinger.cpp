#include "svm/schrodinger.hpp"

#include "svm/errors.hpp"
#include "svm/tridiagonal.hpp"

#include <cmath>
#include <numbers>

namespace svm {
namespace {

// Discrete H on the unknowns: all nodes when periodic, interior nodes otherwise.
struct Hamiltonian {
    std::size_t offset;
    std::size_t n;
    double kinetic;  // hbar^2 / (2 m dx^2)
    std::vector<double> potential;
    bool periodic;
};

Hamiltonian build(const PotentialSpec& V, const Grid1D& g, double hbar, double mass) {
    Hamiltonian h;
    h.periodic = g.periodic;
    h.offset = g.periodic ? 0 : 1;
    h.n = g.periodic ? g.size() : g.size() - 2;
    h.kinetic = hbar * hbar / (2.0 * mass * g.dx() * g.dx());
    h.potential.resize(h.n);
    for (std::size_t i = 0; i < h.n; ++i) {
        h.potential[i] = V(g.x(i + h.offset));
        if (!std::isfinite(h.potential[i])) throw InvalidArgument("potential is not finite on the grid");
    }
    return h;
}

// (I + c H) with complex c: diag 1 + c (2K + V), off-diagonals -c K.
Tridiagonal<Complex> shifted(const Hamiltonian& h, Complex c) {
    Tridiagonal<Complex> m(h.n);
    for (std::size_t i = 0; i < h.n; ++i) {
        m.diag[i] = 1.0 + c * (2.0 * h.kinetic + h.potential[i]);
        m.lower[i] = -c * h.kinetic;
        m.upper[i] = -c * h.kinetic;
    }
    if (!h.periodic) {
        m.lower[0] = 0.0;
        m.upper[h.n - 1] = 0.0;
    }
    return m;
}

void apply_and_solve(const Tridiagonal<Complex>& explicit_part, const Tridiagonal<Complex>& implicit_part,
                     std::span<Complex> psi, bool periodic, std::vector<Complex>& work) {
    work.resize(psi.size());
    explicit_part.multiply(psi, work, periodic);
    if (periodic) solve_cyclic_tridiagonal<Complex>(implicit_part, work);
    else solve_tridiagonal<Complex>(implicit_part, work);
    std::copy(work.begin(), work.end(), psi.begin());
}

}  // namespace

WaveSeries solve_schrodinger(const PotentialSpec& potential, const WaveFunction& psi0, TimeSpan span,
                             std::size_t n_steps, std::size_t snapshot_stride) {
    if (n_steps == 0) throw InvalidArgument("solve_schrodinger: n_steps must be >= 1");
    if (snapshot_stride == 0) throw InvalidArgument("solve_schrodinger: snapshot_stride must be >= 1");
    if (!(span.t_end > span.t_start)) throw InvalidArgument("solve_schrodinger: need t_end > t_start");
    const Grid1D g = psi0.grid();
    const double hbar = psi0.hbar();
    const Hamiltonian h = build(potential, g, hbar, psi0.mass());
    const double tau = (span.t_end - span.t_start) / static_cast<double>(n_steps);
    const Complex c(0.0, 0.5 * tau / hbar);
    const auto implicit_part = shifted(h, c);
    const auto explicit_part = shifted(h, -c);

    std::vector<Complex> full(psi0.values().begin(), psi0.values().end());
    if (!g.periodic) {
        full.front() = 0.0;
        full.back() = 0.0;
    }
    std::span<Complex> unknowns(full.data() + h.offset, h.n);
    std::vector<Complex> work;

    WaveSeries out;
    out.push_back(WaveFunction::normalized(g, full, hbar, psi0.mass(), span.t_start));
    // Renormalising once at t0 absorbs the end-node truncation; afterwards the
    // stepping itself is unitary and no rescaling happens.
    std::copy(out.back().values().begin(), out.back().values().end(), full.begin());
    for (std::size_t step = 0; step < n_steps; ++step) {
        apply_and_solve(explicit_part, implicit_part, unknowns, g.periodic, work);
        const bool last = step + 1 == n_steps;
        if ((step + 1) % snapshot_stride == 0 || last) {
            const double t = last ? span.t_end : span.t_start + static_cast<double>(step + 1) * tau;
            out.emplace_back(g, full, hbar, psi0.mass(), t);
        }
    }
    return out;
}

WaveFunction relax_ground_state(const PotentialSpec& potential, const WaveFunction& guess, double tau,
                                std::size_t n_steps) {
    if (!(tau > 0.0)) throw InvalidArgument("relax_ground_state: tau must be > 0");
    const Grid1D g = guess.grid();
    const Hamiltonian h = build(potential, g, guess.hbar(), guess.mass());
    const Complex c(0.5 * tau / guess.hbar(), 0.0);
    const auto implicit_part = shifted(h, c);
    const auto explicit_part = shifted(h, -c);
    std::vector<Complex> full(guess.values().begin(), guess.values().end());
    if (!g.periodic) {
        full.front() = 0.0;
        full.back() = 0.0;
    }
    std::span<Complex> unknowns(full.data() + h.offset, h.n);
    std::vector<Complex> work;
    for (std::size_t step = 0; step < n_steps; ++step) {
        apply_and_solve(explicit_part, implicit_part, unknowns, g.periodic, work);
        const double s = 1.0 / std::sqrt(trapezoidal_norm(g, full));
        for (Complex& z : full) z *= s;
    }
    return WaveFunction::normalized(g, std::move(full), guess.hbar(), guess.mass(), guess.time());
}

double discrete_energy(const PotentialSpec& potential, const WaveFunction& psi) {
    const Grid1D g = psi.grid();
    const Hamiltonian h = build(potential, g, psi.hbar(), psi.mass());
    Tridiagonal<Complex> H(h.n);
    for (std::size_t i = 0; i < h.n; ++i) {
        H.diag[i] = 2.0 * h.kinetic + h.potential[i];
        H.lower[i] = -h.kinetic;
        H.upper[i] = -h.kinetic;
    }
    std::vector<Complex> x(psi.values().begin() + static_cast<long>(h.offset),
                           psi.values().begin() + static_cast<long>(h.offset + h.n));
    std::vector<Complex> hx(h.n);
    H.multiply(x, hx, g.periodic);
    Complex e = 0.0;
    for (std::size_t i = 0; i < h.n; ++i) e += std::conj(x[i]) * hx[i] * g.dx();
    return e.real();
}

WaveFunction gaussian_packet(const Grid1D& grid, double center, double width, double k, double hbar, double mass) {
    if (!(width > 0.0)) throw InvalidArgument("gaussian_packet: width must be > 0");
    std::vector<Complex> psi(grid.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double d = grid.x(i) - center;
        psi[i] = std::polar(std::exp(-d * d / (4.0 * width * width)), k * d);
    }
    return WaveFunction::normalized(grid, std::move(psi), hbar, mass, 0.0);
}

WaveFunction plane_wave(const Grid1D& grid, double k, double hbar, double mass) {
    if (!grid.periodic) throw InvalidArgument("plane_wave: requires a periodic grid");
    const double length = grid.x_max - grid.x_min;
    const double q = 2.0 * std::numbers::pi / length;
    const double snapped = std::round(k / q) * q;
    std::vector<Complex> psi(grid.size());
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = std::polar(1.0, snapped * (grid.x(i) - grid.x_min));
    return WaveFunction::normalized(grid, std::move(psi), hbar, mass, 0.0);
}

}  // namespace svm
