#pragma once

#include "svm/grid.hpp"
#include "svm/potential.hpp"
#include "svm/time_grid.hpp"
#include "svm/wavefunction.hpp"

#include <cstddef>
#include <vector>

namespace svm {

using WaveSeries = std::vector<WaveFunction>;

/// i d_t psi = [-nu d_xx + V / (2 nu m)] psi, nu = hbar/(2m), by Crank-Nicolson.
/// Dirichlet ends (psi = 0 at both end nodes) on non-periodic grids, cyclic on
/// periodic ones. Unitary in the trapezoidal norm. Returns snapshots every
/// `snapshot_stride` steps plus the final state.
[[nodiscard]] WaveSeries solve_schrodinger(const PotentialSpec& potential, const WaveFunction& psi_initial,
                                           TimeSpan span, std::size_t n_steps, std::size_t snapshot_stride = 1);

/// Imaginary-time Crank-Nicolson relaxation toward the lowest state reachable
/// from `guess`, renormalising each step. Used to prepare initial states.
[[nodiscard]] WaveFunction relax_ground_state(const PotentialSpec& potential, const WaveFunction& guess, double tau,
                                              std::size_t n_steps);

/// <psi|H|psi> with the same discrete Hamiltonian as the solver.
[[nodiscard]] double discrete_energy(const PotentialSpec& potential, const WaveFunction& psi);

/// Gaussian packet with density N(center, width^2) and wave number k.
[[nodiscard]] WaveFunction gaussian_packet(const Grid1D& grid, double center, double width, double k, double hbar,
                                           double mass);
/// e^{ikx}, normalised; k is snapped so the wave is periodic on the grid.
[[nodiscard]] WaveFunction plane_wave(const Grid1D& grid, double k, double hbar, double mass);

}  // namespace svm
