#include "svm/density.hpp"
#include "svm/drift_fields.hpp"
#include "svm/errors.hpp"
#include "svm/finite_difference.hpp"
#include "svm/fokker_planck.hpp"
#include "svm/hydrodynamics.hpp"
#include "svm/lagrangian.hpp"
#include "svm/madelung.hpp"
#include "svm/schrodinger.hpp"
#include "svm/tridiagonal.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace svm;

namespace {

constexpr double pi = std::numbers::pi;

double normal_pdf(double x, double mean, double var) {
    return std::exp(-(x - mean) * (x - mean) / (2.0 * var)) / std::sqrt(2.0 * pi * var);
}

DensityEstimate normal_density(const Grid1D& g, double mean, double var) {
    return DensityEstimate::from_field(GridField::from_function(g, [=](double x) { return normal_pdf(x, mean, var); }));
}

double mean_of(const GridField& rho) {
    const Grid1D& g = rho.grid();
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = g.x(i) * rho[i];
    return g.integrate(f);
}

double variance_of(const GridField& rho) {
    const Grid1D& g = rho.grid();
    const double m = mean_of(rho);
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = (g.x(i) - m) * (g.x(i) - m) * rho[i];
    return g.integrate(f);
}

double max_abs_diff(const GridField& a, const GridField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Free packet with hbar = m = 1 and initial density N(0, s0^2):
// s(t)^2 = s0^2 + (nu t / s0)^2, v = x nu^2 t / (s0^2 s(t)^2).
struct FreePacket {
    double s0 = 1.0;
    double nu = 0.5;
    [[nodiscard]] double var(double t) const { return s0 * s0 + (nu * t / s0) * (nu * t / s0); }
    [[nodiscard]] double v(double x, double t) const { return x * nu * nu * t / (s0 * s0 * var(t)); }
    [[nodiscard]] double u(double x, double t) const { return v(x, t) - nu * x / var(t); }
    [[nodiscard]] Complex psi(double x, double t) const {
        const Complex a(1.0, nu * t / (s0 * s0));
        return std::pow(2.0 * pi * s0 * s0, -0.25) / std::sqrt(a) * std::exp(-x * x / (4.0 * s0 * s0 * a));
    }
};

double l2_error_vs_free_packet(std::size_t cells, std::size_t steps) {
    const FreePacket fp;
    const Grid1D g{-20.0, 20.0, cells, false};
    const WaveFunction psi0 = gaussian_packet(g, 0.0, fp.s0, 0.0, 1.0, 1.0);
    const auto series = solve_schrodinger(PotentialSpec::free(), psi0, {0.0, 2.0}, steps, steps);
    const WaveFunction& psi = series.back();
    std::vector<double> err(g.size());
    for (std::size_t i = 0; i < err.size(); ++i) err[i] = std::norm(psi[i] - fp.psi(g.x(i), 2.0));
    return std::sqrt(g.integrate(err));
}

Tridiagonal<double> random_dominant(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Tridiagonal<double> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a.lower[i] = u(rng);
        a.upper[i] = u(rng);
        a.diag[i] = 3.0 + u(rng);
    }
    return a;
}

}  // namespace

TEST(Tridiagonal, SolveInvertsMultiply) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        for (bool periodic : {false, true}) {
            const auto a = random_dominant(17, seed);
            std::vector<double> x(17), b(17);
            for (std::size_t i = 0; i < 17; ++i) x[i] = std::sin(static_cast<double>(i) + seed);
            a.multiply(x, b, periodic);
            if (periodic) solve_cyclic_tridiagonal<double>(a, b);
            else solve_tridiagonal<double>(a, b);
            for (std::size_t i = 0; i < 17; ++i) EXPECT_NEAR(b[i], x[i], 1e-12) << seed << periodic;
        }
    }
}

TEST(Tridiagonal, ComplexSystems) {
    Tridiagonal<Complex> a(5);
    for (std::size_t i = 0; i < 5; ++i) {
        a.lower[i] = Complex(0.0, -0.5);
        a.upper[i] = Complex(0.0, -0.5);
        a.diag[i] = Complex(1.0, 1.0);
    }
    const std::vector<Complex> x{{1, 0}, {0, 1}, {-1, 2}, {0.5, 0}, {0, -1}};
    std::vector<Complex> b(5);
    a.multiply(x, b, false);
    solve_tridiagonal<Complex>(a, b);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_LT(std::abs(b[i] - x[i]), 1e-13);
}

TEST(Tridiagonal, SingularAndTooSmall) {
    Tridiagonal<double> a(3);
    EXPECT_THROW(solve_tridiagonal<double>(a, std::span<double>(a.diag)), Error);
    Tridiagonal<double> b(2);
    std::vector<double> r(2, 1.0);
    EXPECT_THROW(solve_cyclic_tridiagonal<double>(b, r), InvalidArgument);
}

TEST(FiniteDifference, QuadraticsAreExactIncludingEnds) {
    const Grid1D g{-1.0, 2.0, 30, false};
    const auto f = GridField::from_function(g, [](double x) { return 3.0 * x * x - x + 2.0; });
    const auto d = fd::gradient(f);
    const auto d2 = fd::laplacian(f);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_NEAR(d[i], 6.0 * g.x(i) - 1.0, 1e-11);
        EXPECT_NEAR(d2[i], 6.0, 1e-9);
    }
}

TEST(FiniteDifference, SecondOrderOnPeriodicSine) {
    auto err = [](std::size_t n) {
        const Grid1D g{0.0, 2.0 * pi, n, true};
        const auto d = fd::gradient(GridField::from_function(g, [](double x) { return std::sin(x); }));
        double e = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) e = std::max(e, std::abs(d[i] - std::cos(g.x(i))));
        return e;
    };
    const double ratio = err(32) / err(64);
    EXPECT_NEAR(ratio, 4.0, 0.2);
}

TEST(FiniteDifference, MaskedRunsUseOneSidedStencils) {
    const Grid1D g{0.0, 1.0, 10, false};
    std::vector<double> v(g.size());
    std::vector<std::uint8_t> valid(g.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = g.x(i) * g.x(i);
    valid[5] = 0;
    const GridField f(g, v, valid);
    const auto d = fd::gradient(f);
    EXPECT_FALSE(d.valid(5));
    for (std::size_t i : {0u, 3u, 4u, 6u, 10u}) {
        ASSERT_TRUE(d.valid(i)) << i;
        EXPECT_NEAR(d[i], 2.0 * g.x(i), 1e-12) << i;
    }
}

TEST(FiniteDifference, IsolatedNodesAreMasked) {
    const Grid1D g{0.0, 1.0, 6, false};
    std::vector<std::uint8_t> valid{1, 1, 1, 0, 1, 0, 1};
    const GridField f(g, std::vector<double>(7, 1.0), valid);
    const auto d = fd::gradient(f);
    EXPECT_FALSE(d.valid(4));
    EXPECT_TRUE(d.valid(1));
}

TEST(FiniteDifference, TimeDerivativeOfQuadraticInTime) {
    const Grid1D g{0.0, 1.0, 4, false};
    FieldSeries s;
    for (int j = 0; j < 5; ++j) {
        const double t = 0.3 * j;
        s.snapshots.push_back(GridField::from_function(g, [t](double x) { return t * t + x * t; }, t));
    }
    const auto d = fd::time_derivative(s);
    ASSERT_EQ(d.size(), 5u);
    for (int j = 0; j < 5; ++j)
        for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(d[j][i], 2.0 * 0.3 * j + g.x(i), 1e-12);
}

TEST(FokkerPlanckForward, FreeDiffusionVarianceGrowsAsTwoNuT) {
    const Grid1D g{-12.0, 12.0, 960, false};
    const double nu = 0.5;
    for (auto scheme : {FokkerPlanckScheme::crank_nicolson, FokkerPlanckScheme::semi_implicit}) {
        const auto out = solve_fokker_planck_forward(DriftSpec::zero(), nu, normal_density(g, 0.0, 1.0), {0.0, 1.0},
                                                     {scheme, 1000, 100});
        ASSERT_EQ(out.size(), 11u);
        for (const auto& r : out) {
            const double t = *r.time();
            EXPECT_NEAR(variance_of(r.base), 1.0 + 2.0 * nu * t, 1e-6) << t;
            EXPECT_NEAR(r.base.integral(), 1.0, 1e-8);
        }
        EXPECT_LT(l1_distance(out.back().base, normal_density(g, 0.0, 2.0).base), 1e-3);
    }
}

TEST(FokkerPlanckForward, ConstantDriftTranslates) {
    const Grid1D g{-10.0, 10.0, 800, false};
    const auto out = solve_fokker_planck_forward(DriftSpec::constant(1.5), 0.25, normal_density(g, -2.0, 0.5),
                                                 {0.0, 2.0}, {FokkerPlanckScheme::crank_nicolson, 2000, 2000});
    EXPECT_NEAR(mean_of(out.back().base), 1.0, 1e-6);
    EXPECT_NEAR(variance_of(out.back().base), 0.5 + 2.0 * 0.25 * 2.0, 1e-5);
}

TEST(FokkerPlanckForward, OrnsteinUhlenbeckRelaxes) {
    // u = -x, nu: var(t) = nu + (var0 - nu) e^{-2t}.
    const Grid1D g{-6.0, 6.0, 960, false};
    const double nu = 0.5;
    const auto u = DriftSpec::scalar([](double x, double) { return -x; });
    const auto out = solve_fokker_planck_forward(u, nu, normal_density(g, 0.0, 0.2), {0.0, 3.0},
                                                 {FokkerPlanckScheme::crank_nicolson, 3000, 1000});
    for (const auto& r : out) {
        const double t = *r.time();
        EXPECT_NEAR(variance_of(r.base), nu + (0.2 - nu) * std::exp(-2.0 * t), 1e-4) << t;
    }
    EXPECT_LT(l1_distance(out.back().base, normal_density(g, 0.0, nu + (0.2 - nu) * std::exp(-6.0)).base), 1e-3);
}

TEST(FokkerPlanckForward, StationaryStateStaysPut) {
    const Grid1D g{-6.0, 6.0, 600, false};
    const auto u = DriftSpec::scalar([](double x, double) { return -x; });
    const auto rho = normal_density(g, 0.0, 0.5);
    const auto out = solve_fokker_planck_forward(u, 0.5, rho, {0.0, 2.0}, {FokkerPlanckScheme::crank_nicolson, 400, 400});
    EXPECT_LT(l1_distance(out.back().base, rho.base), 1e-4);
}

TEST(FokkerPlanckForward, SemiImplicitRejectsLargeSteps) {
    const Grid1D g{-5.0, 5.0, 1000, false};
    EXPECT_THROW(solve_fokker_planck_forward(DriftSpec::constant(50.0), 0.5, normal_density(g, 0.0, 1.0), {0.0, 1.0},
                                             {FokkerPlanckScheme::semi_implicit, 10, 1}),
                 StabilityError);
}

TEST(FokkerPlanckForward, PositivityOfSemiImplicit) {
    const Grid1D g{-5.0, 5.0, 200, false};
    const auto out = solve_fokker_planck_forward(DriftSpec::constant(1.0), 0.05, normal_density(g, -2.0, 0.05),
                                                 {0.0, 2.0}, {FokkerPlanckScheme::semi_implicit, 2000, 200});
    for (const auto& r : out)
        for (std::size_t i = 0; i < g.size(); ++i) EXPECT_GE(r[i], 0.0);
}

TEST(FokkerPlanckBackward, RecoversTheInitialHeatKernel) {
    // Forward free diffusion from N(0, 1) with nu = 1/2; u~ = 2 nu x / var(t).
    const Grid1D g{-12.0, 12.0, 960, false};
    const double nu = 0.5;
    const auto u_tilde = DriftSpec::scalar([=](double x, double t) { return 2.0 * nu * x / (1.0 + 2.0 * nu * t); });
    const auto out = solve_fokker_planck_backward(u_tilde, nu, normal_density(g, 0.0, 2.0), {0.0, 1.0},
                                                  {FokkerPlanckScheme::crank_nicolson, 1000, 250});
    ASSERT_EQ(out.size(), 5u);
    EXPECT_DOUBLE_EQ(*out.front().time(), 1.0);
    EXPECT_DOUBLE_EQ(*out.back().time(), 0.0);
    for (const auto& r : out) {
        const double t = *r.time();
        EXPECT_NEAR(variance_of(r.base), 1.0 + 2.0 * nu * t, 3e-4) << t;
        EXPECT_NEAR(r.base.integral(), 1.0, 1e-8);
    }
    EXPECT_LT(l1_distance(out.back().base, normal_density(g, 0.0, 1.0).base), 1e-3);
}

TEST(FokkerPlanckBackward, RoundTripThroughBothEquations) {
    // Drifting, spreading density: u = c, rho_t = N(c t, 1 + 2 nu t).
    const Grid1D g{-12.0, 14.0, 1040, false};
    const double nu = 0.4, c = 1.0;
    const auto rho0 = normal_density(g, 0.0, 1.0);
    const auto fwd = solve_fokker_planck_forward(DriftSpec::constant(c), nu, rho0, {0.0, 2.0},
                                                 {FokkerPlanckScheme::crank_nicolson, 2000, 2000});
    const auto u_tilde = DriftSpec::scalar([=](double x, double t) { return c + 2.0 * nu * (x - c * t) / (1.0 + 2.0 * nu * t); });
    const auto bwd = solve_fokker_planck_backward(u_tilde, nu, fwd.back(), {0.0, 2.0},
                                                  {FokkerPlanckScheme::crank_nicolson, 2000, 2000});
    EXPECT_NEAR(mean_of(bwd.back().base), 0.0, 1e-4);
    EXPECT_LT(l1_distance(bwd.back().base, rho0.base), 1e-3);
}

TEST(Continuity, ZeroVelocityIsStatic) {
    const Grid1D g{-5.0, 5.0, 200, false};
    const auto rho = normal_density(g, 0.3, 0.7);
    const auto out = solve_continuity(DriftSpec::zero(), rho, {0.0, 1.0}, {FokkerPlanckScheme::crank_nicolson, 100, 100});
    EXPECT_LT(max_abs_diff(out.back().base, rho.base), 1e-14);
}

TEST(Continuity, UniformVelocityTranslates) {
    const Grid1D g{-8.0, 8.0, 1600, false};
    const auto out = solve_continuity(DriftSpec::constant(2.0), normal_density(g, -3.0, 0.5), {0.0, 2.0},
                                      {FokkerPlanckScheme::crank_nicolson, 2000, 2000});
    EXPECT_NEAR(mean_of(out.back().base), 1.0, 1e-6);
    EXPECT_LT(l1_distance(out.back().base, normal_density(g, 1.0, 0.5).base), 2e-3);
    EXPECT_NEAR(out.back().base.integral(), 1.0, 1e-8);
}

TEST(Continuity, FreePacketMadelungVelocity) {
    const FreePacket fp;
    const Grid1D g{-15.0, 15.0, 1200, false};
    const auto v = DriftSpec::scalar([fp](double x, double t) { return fp.v(x, t); });
    const auto out = solve_continuity(v, normal_density(g, 0.0, 1.0), {0.0, 2.0},
                                      {FokkerPlanckScheme::crank_nicolson, 2000, 500});
    for (const auto& r : out) {
        const double t = *r.time();
        EXPECT_LT(l1_distance(r.base, normal_density(g, 0.0, fp.var(t)).base), 1e-3) << t;
        EXPECT_NEAR(r.base.integral(), 1.0, 1e-8);
    }
}

TEST(Continuity, SeriesVelocityMatchesTheFunction) {
    const FreePacket fp;
    const Grid1D g{-15.0, 15.0, 600, false};
    FieldSeries vs;
    for (int j = 0; j <= 40; ++j) {
        const double t = 0.05 * j;
        vs.snapshots.push_back(GridField::from_function(g, [&](double x) { return fp.v(x, t); }, t));
    }
    const auto out = solve_continuity(vs, normal_density(g, 0.0, 1.0), {0.0, 2.0},
                                      {FokkerPlanckScheme::crank_nicolson, 400, 400});
    EXPECT_LT(l1_distance(out.back().base, normal_density(g, 0.0, fp.var(2.0)).base), 2e-3);
}

TEST(Schrodinger, PlaneWaveDensityIsStationary) {
    const Grid1D g{0.0, 2.0 * pi, 128, true};
    const WaveFunction psi = plane_wave(g, 3.0, 1.0, 1.0);
    const auto out = solve_schrodinger(PotentialSpec::free(), psi, {0.0, 5.0}, 500, 100);
    for (const auto& s : out) {
        EXPECT_LT(max_abs_diff(s.density(), psi.density()), 1e-12);
        EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    }
}

TEST(Schrodinger, FreePacketSpreadsAnalytically) {
    const FreePacket fp;
    const Grid1D g{-20.0, 20.0, 1600, false};
    const auto out = solve_schrodinger(PotentialSpec::free(), gaussian_packet(g, 0.0, fp.s0, 0.0, 1.0, 1.0),
                                       {0.0, 3.0}, 1500, 300);
    ASSERT_EQ(out.size(), 6u);
    for (const auto& s : out) {
        const double t = *s.time();
        EXPECT_NEAR(variance_of(s.density()), fp.var(t), 1e-3 * fp.var(t)) << t;
    }
}

TEST(Schrodinger, SecondOrderConvergenceToTheAnalyticPacket) {
    const double e1 = l2_error_vs_free_packet(400, 100);
    const double e2 = l2_error_vs_free_packet(800, 200);
    EXPECT_LT(e2, 1e-2);
    EXPECT_NEAR(e1 / e2, 4.0, 0.5);
}

TEST(Schrodinger, GroundStateIsStationaryOverTenPeriods) {
    const Grid1D g{-8.0, 8.0, 800, false};
    const auto V = PotentialSpec::harmonic(1.0);
    const auto psi0 = relax_ground_state(V, gaussian_packet(g, 0.0, 0.8, 0.0, 1.0, 1.0), 0.01, 3000);
    EXPECT_NEAR(discrete_energy(V, psi0), 0.5, 1e-4);
    const auto out = solve_schrodinger(V, psi0, {0.0, 20.0 * pi}, 2000, 200);
    for (const auto& s : out) {
        EXPECT_LT(max_abs_diff(s.density(), psi0.density()), 1e-6);
        EXPECT_NEAR(s.norm(), 1.0, 1e-8);
    }
}

TEST(Schrodinger, UnitaryForAMovingCoherentState) {
    const Grid1D g{-10.0, 10.0, 1000, false};
    const auto out = solve_schrodinger(PotentialSpec::harmonic(1.0), gaussian_packet(g, 2.0, std::sqrt(0.5), 0.0, 1.0, 1.0),
                                       {0.0, 2.0 * pi}, 2000, 50);
    for (const auto& s : out) EXPECT_NEAR(s.norm(), 1.0, 1e-8);
    // Coherent state returns to its start after one period.
    EXPECT_NEAR(mean_of(out.back().density()), 2.0, 1e-3);
    EXPECT_NEAR(mean_of(out[out.size() / 2].density()), -2.0, 1e-3);
}

TEST(Schrodinger, DiscreteEnergyIsConserved) {
    const Grid1D g{-8.0, 8.0, 640, false};
    const auto V = PotentialSpec::double_well(0.25, 1.0);
    const auto psi0 = gaussian_packet(g, -std::sqrt(2.0), 0.4, 0.0, 1.0, 1.0);
    const auto out = solve_schrodinger(V, psi0, {0.0, 2.0}, 400, 400);
    EXPECT_NEAR(discrete_energy(V, out.back()), discrete_energy(V, psi0), 1e-9);
}

TEST(Schrodinger, RejectsBadArguments) {
    const Grid1D g{-5.0, 5.0, 100, false};
    const auto psi = gaussian_packet(g, 0.0, 1.0, 0.0, 1.0, 1.0);
    EXPECT_THROW((void)solve_schrodinger(PotentialSpec::free(), psi, {0.0, 1.0}, 0, 1), InvalidArgument);
}

TEST(Madelung, PlaneWaveVelocityIsHbarKOverM) {
    const Grid1D g{0.0, 2.0 * pi, 256, true};
    const auto f = madelung_decompose(plane_wave(g, 2.0, 1.0, 2.0));
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_NEAR(f.v[i], 1.0, 1e-3);
        EXPECT_NEAR(f.rho[i], 1.0 / (2.0 * pi), 1e-12);
    }
}

TEST(Madelung, PhaseIsUnwrapped) {
    const Grid1D g{-10.0, 10.0, 2000, false};
    const auto f = madelung_decompose(gaussian_packet(g, 0.0, 2.0, 3.0, 1.0, 1.0));
    EXPECT_NEAR(f.theta[g.size() - 1] - f.theta[0], 3.0 * 20.0, 1e-6);
    EXPECT_NEAR(f.v[1000], 3.0, 1e-4);
}

TEST(Madelung, ComposeInvertsDecompose) {
    const Grid1D g{-10.0, 10.0, 500, false};
    const auto psi = solve_schrodinger(PotentialSpec::free(), gaussian_packet(g, -1.0, 1.0, 1.0, 1.0, 1.0), {0.0, 1.0},
                                       100, 100)
                         .back();
    const auto f = madelung_decompose(psi);
    const auto back = madelung_compose(f.rho, f.theta, 1.0, 1.0);
    // Global phase is arbitrary; compare after aligning at the peak. Nodes
    // below the density floor carry no phase information.
    std::size_t peak = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(psi[i]) > std::abs(psi[peak])) peak = i;
    const Complex phase = psi[peak] / back[peak] * std::abs(back[peak]) / std::abs(psi[peak]);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (f.theta.valid(i)) {
            EXPECT_LT(std::abs(back[i] * phase - psi[i]), 1e-10) << i;
        }
}

TEST(Madelung, ComposeOfUniformDensityIsConstantAndReal) {
    const Grid1D g{0.0, 4.0, 40, true};
    const auto psi = madelung_compose(DensityEstimate{GridField(g, std::vector<double>(g.size(), 0.25)), 0, 0.0},
                                      GridField(g, std::vector<double>(g.size(), 0.0)), 1.0, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LT(std::abs(psi[i] - Complex(0.5, 0.0)), 1e-14);
}

TEST(Madelung, ComposedGroundStateMatchesTheClosedForm) {
    const Grid1D g{-8.0, 8.0, 640, false};
    const auto rho = normal_density(g, 0.0, 0.5);
    const auto psi = madelung_compose(rho, GridField(g, std::vector<double>(g.size(), 0.0)), 1.0, 1.0);
    const double c = std::pow(pi, -0.25);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double exact = c * std::exp(-0.5 * g.x(i) * g.x(i));
        EXPECT_NEAR(psi[i].real(), exact, 1e-10);
        EXPECT_EQ(psi[i].imag(), 0.0);
    }
}

TEST(Madelung, ComposedDriftingPacketDecomposesToItsInputs) {
    const Grid1D g{-10.0, 10.0, 1000, false};
    const auto rho = normal_density(g, 0.5, 1.5);
    const double k = 1.25;
    const auto theta = GridField::from_function(g, [k](double x) { return k * x; });
    const auto f = madelung_decompose(madelung_compose(rho, theta, 1.0, 1.0));
    // The phase comes back up to a constant fixed at the first unmasked node.
    std::size_t first = 0;
    while (!f.theta.valid(first)) ++first;
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_NEAR(f.rho[i], rho[i], 1e-14);
        if (f.theta.valid(i)) {
            EXPECT_NEAR(f.theta[i] - f.theta[first], theta[i] - theta[first], 1e-9);
        }
    }
    EXPECT_NEAR(f.v[500], k, 1e-9);
}

TEST(Madelung, InteriorNodeIsDetected) {
    const Grid1D g{-5.0, 5.0, 200, false};
    std::vector<Complex> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = g.x(i) * std::exp(-g.x(i) * g.x(i) / 2.0);
    EXPECT_THROW((void)madelung_decompose(WaveFunction::normalized(g, v, 1.0, 1.0)), NodeDetected);
}

TEST(Madelung, NegativeDensityIsRejected) {
    const Grid1D g{-1.0, 1.0, 4, false};
    DensityEstimate rho{GridField(g, {0.5, 0.5, -0.1, 0.5, 0.5}), 0, 0.0};
    EXPECT_THROW((void)madelung_compose(rho, GridField(g, std::vector<double>(5, 0.0)), 1.0, 1.0), InvalidArgument);
}

TEST(DensitySolvers, AgreeOnTheFreePacket) {
    // Schrodinger, forward Fokker-Planck with u and continuity with v all
    // propagate the same density.
    const FreePacket fp;
    const Grid1D g{-15.0, 15.0, 1200, false};
    const TimeSpan span{0.0, 2.0};
    const auto psi = solve_schrodinger(PotentialSpec::free(), gaussian_packet(g, 0.0, fp.s0, 0.0, 1.0, 1.0), span,
                                       2000, 2000)
                         .back();
    const auto rho0 = normal_density(g, 0.0, 1.0);
    const DensitySolverOptions opt{FokkerPlanckScheme::crank_nicolson, 2000, 2000};
    const auto fpk = solve_fokker_planck_forward(DriftSpec::scalar([fp](double x, double t) { return fp.u(x, t); }), fp.nu,
                                                 rho0, span, opt)
                         .back();
    const auto cont = solve_continuity(DriftSpec::scalar([fp](double x, double t) { return fp.v(x, t); }), rho0, span, opt)
                          .back();
    const GridField rs = psi.density();
    EXPECT_LT(l1_distance(rs, fpk.base), 1e-3);
    EXPECT_LT(l1_distance(rs, cont.base), 1e-3);
    EXPECT_LT(l1_distance(fpk.base, cont.base), 1e-3);
}

TEST(Hydrodynamics, FreePacketMatchesTheAnalyticFields) {
    const FreePacket fp;
    const Grid1D g{-10.0, 10.0, 800, false};
    const StochasticLagrangian lag{1.0, PotentialSpec::free(), 0.5};
    const auto out = evolve_hydrodynamics(normal_density(g, 0.0, 1.0), GridField(g, std::vector<double>(g.size(), 0.0)),
                                          lag, {0.0, 2.0}, 2000, 500);
    ASSERT_EQ(out.rho.size(), 5u);
    for (std::size_t j = 0; j < out.rho.size(); ++j) {
        const double t = *out.rho[j].time();
        EXPECT_LT(l1_distance(out.rho[j], normal_density(g, 0.0, fp.var(t)).base), 1e-3) << t;
        EXPECT_NEAR(out.rho[j].integral(), 1.0, 1e-3);
        for (double x : {-2.0, -0.5, 1.0, 2.0}) EXPECT_NEAR(out.v[j].interpolate(x), fp.v(x, t), 1e-3) << x << " " << t;
    }
}

TEST(Hydrodynamics, GroundStateIsStationary) {
    const Grid1D g{-8.0, 8.0, 640, false};
    const StochasticLagrangian lag{1.0, PotentialSpec::harmonic(1.0), 0.5};
    const auto rho = normal_density(g, 0.0, 0.5);
    const auto out = evolve_hydrodynamics(rho, GridField(g, std::vector<double>(g.size(), 0.0)), lag, {0.0, 2.0 * pi},
                                          20000, 20000);
    EXPECT_LT(l1_distance(out.rho.snapshots.back(), rho.base), 1e-3);
    for (double x : {-2.0, 0.0, 2.0}) EXPECT_NEAR(out.v.snapshots.back().interpolate(x), 0.0, 1e-3);
}

TEST(Hydrodynamics, RejectsAMaskedCore) {
    const Grid1D g{-8.0, 8.0, 320, false};
    std::vector<std::uint8_t> valid(g.size(), 1);
    valid[160] = 0;
    const GridField v(g, std::vector<double>(g.size(), 0.0), valid);
    const StochasticLagrangian lag{1.0, PotentialSpec::free(), 0.5};
    EXPECT_THROW((void)evolve_hydrodynamics(normal_density(g, 0.0, 1.0), v, lag, {0.0, 1.0}, 100, 100), InvalidArgument);
}
