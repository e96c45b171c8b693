#include "svm/fokker_planck.hpp"

#include "svm/drift_fields.hpp"
#include "svm/errors.hpp"
#include "svm/tridiagonal.hpp"

#include <algorithm>
#include <cmath>

namespace svm {
namespace {

struct Face {
    std::size_t left;
    std::size_t right;
    double x;
};

std::vector<Face> faces_of(const Grid1D& g) {
    const std::size_t m = g.size();
    const std::size_t nf = g.periodic ? m : m - 1;
    std::vector<Face> faces(nf);
    for (std::size_t f = 0; f < nf; ++f) faces[f] = {f, (f + 1) % m, g.x_min + (static_cast<double>(f) + 0.5) * g.dx()};
    return faces;
}

// d rho / dt = A rho with face flux F = a (rho_L + rho_R)/2 - D (rho_R - rho_L)/dx
// (advective part dropped when `with_advection` is false).
Tridiagonal<double> assemble(const Grid1D& g, const std::vector<Face>& faces, const std::vector<double>& a,
                             double diffusion, bool with_advection) {
    const std::size_t m = g.size();
    Tridiagonal<double> A(m);
    const double dx = g.dx();
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const std::size_t L = faces[f].left;
        const std::size_t R = faces[f].right;
        const double adv = with_advection ? 0.5 * a[f] : 0.0;
        const double cl = adv + diffusion / dx;
        const double cr = adv - diffusion / dx;
        const double wl = g.weight(L);
        const double wr = g.weight(R);
        A.diag[L] -= cl / wl;
        A.diag[R] += cr / wr;
        if (R == L + 1) {
            A.upper[L] -= cr / wl;
            A.lower[R] += cl / wr;
        } else {  // periodic wrap face: L = m-1, R = 0
            A.upper[m - 1] -= cr / wl;
            A.lower[0] += cl / wr;
        }
    }
    return A;
}

void solve(const Tridiagonal<double>& M, std::span<double> rhs, bool periodic) {
    if (periodic) solve_cyclic_tridiagonal<double>(M, rhs);
    else solve_tridiagonal<double>(M, rhs);
}

DensitySeries run(const DriftSpec& drift, double diffusion, const DensityEstimate& rho0, double t_from, double t_to,
                  const DensitySolverOptions& opt, const char* who) {
    const Grid1D g = rho0.grid();
    g.validate();
    if (opt.n_steps == 0) throw InvalidArgument(std::string(who) + ": n_steps must be >= 1");
    if (opt.snapshot_stride == 0) throw InvalidArgument(std::string(who) + ": snapshot_stride must be >= 1");
    if (!drift.evaluate) throw InvalidArgument(std::string(who) + ": drift has no evaluator");
    const double tau = (t_to - t_from) / static_cast<double>(opt.n_steps);
    if (tau * diffusion < 0.0) throw InvalidArgument(std::string(who) + ": diffusion runs against the time direction");

    const std::vector<Face> faces = faces_of(g);
    const std::size_t m = g.size();
    std::vector<double> rho(rho0.base.values().begin(), rho0.base.values().end());
    std::vector<double> a(faces.size());
    std::vector<double> rhs(m);

    DensitySeries out;
    auto snapshot = [&](double t) {
        out.push_back(DensityEstimate{GridField(g, rho, t), rho0.n_samples, rho0.bandwidth});
    };
    snapshot(t_from);

    const double dx = g.dx();
    // Implicit diffusion matrix for the semi-implicit scheme is time independent.
    Tridiagonal<double> implicit_diffusion(m);
    if (opt.scheme == FokkerPlanckScheme::semi_implicit) {
        implicit_diffusion = assemble(g, faces, a, diffusion, false);
        for (std::size_t i = 0; i < m; ++i) {
            implicit_diffusion.lower[i] *= -tau;
            implicit_diffusion.upper[i] *= -tau;
            implicit_diffusion.diag[i] = 1.0 - tau * implicit_diffusion.diag[i];
        }
    }

    for (std::size_t step = 0; step < opt.n_steps; ++step) {
        const double t = t_from + static_cast<double>(step) * tau;
        if (opt.scheme == FokkerPlanckScheme::crank_nicolson) {
            const double t_mid = t + 0.5 * tau;
            for (std::size_t f = 0; f < faces.size(); ++f) a[f] = drift(faces[f].x, t_mid);
            Tridiagonal<double> A = assemble(g, faces, a, diffusion, true);
            A.multiply(rho, rhs, g.periodic);
            for (std::size_t i = 0; i < m; ++i) rhs[i] = rho[i] + 0.5 * tau * rhs[i];
            for (std::size_t i = 0; i < m; ++i) {
                A.lower[i] *= -0.5 * tau;
                A.upper[i] *= -0.5 * tau;
                A.diag[i] = 1.0 - 0.5 * tau * A.diag[i];
            }
            solve(A, rhs, g.periodic);
        } else {
            double a_max = 0.0;
            for (std::size_t f = 0; f < faces.size(); ++f) {
                a[f] = drift(faces[f].x, t);
                a_max = std::max(a_max, std::abs(a[f]));
            }
            if (a_max * std::abs(tau) > dx) {
                throw StabilityError(std::string(who) + ": advective CFL bound violated at t = " + std::to_string(t),
                                     0.9 * dx / a_max);
            }
            std::copy(rho.begin(), rho.end(), rhs.begin());
            for (std::size_t f = 0; f < faces.size(); ++f) {
                const std::size_t L = faces[f].left;
                const std::size_t R = faces[f].right;
                const double flux = a[f] > 0.0 ? a[f] * rho[L] : a[f] * rho[R];
                rhs[L] -= tau * flux / g.weight(L);
                rhs[R] += tau * flux / g.weight(R);
            }
            solve(implicit_diffusion, rhs, g.periodic);
        }
        rho.swap(rhs);
        for (double r : rho)
            if (!std::isfinite(r)) throw IntegrationDiverged(step + 1, 0);
        const bool last = step + 1 == opt.n_steps;
        if ((step + 1) % opt.snapshot_stride == 0 || last) snapshot(last ? t_to : t + tau);
    }
    return out;
}

void check_nu(double nu, const char* who) {
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument(std::string(who) + ": nu must be >= 0");
}

}  // namespace

DensitySeries solve_fokker_planck_forward(const DriftSpec& u, double nu, const DensityEstimate& rho_initial,
                                          TimeSpan span, const DensitySolverOptions& options) {
    check_nu(nu, "solve_fokker_planck_forward");
    return run(u, nu, rho_initial, span.t_start, span.t_end, options, "solve_fokker_planck_forward");
}

DensitySeries solve_fokker_planck_backward(const DriftSpec& u_tilde, double nu, const DensityEstimate& rho_final,
                                           TimeSpan span, const DensitySolverOptions& options) {
    check_nu(nu, "solve_fokker_planck_backward");
    // Flux u~ rho + nu d_x rho: the same operator with diffusion -nu, run toward t_start.
    return run(u_tilde, -nu, rho_final, span.t_end, span.t_start, options, "solve_fokker_planck_backward");
}

DensitySeries solve_continuity(const DriftSpec& v, const DensityEstimate& rho_initial, TimeSpan span,
                               const DensitySolverOptions& options) {
    return run(v, 0.0, rho_initial, span.t_start, span.t_end, options, "solve_continuity");
}

DensitySeries solve_continuity(const FieldSeries& v, const DensityEstimate& rho_initial, TimeSpan span,
                               const DensitySolverOptions& options) {
    for (const auto& s : v.snapshots) require_same_grid(s.grid(), rho_initial.grid(), "solve_continuity");
    return solve_continuity(drift_from_series(v, "v"), rho_initial, span, options);
}

}  // namespace svm
