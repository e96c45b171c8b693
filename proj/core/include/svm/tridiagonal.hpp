#pragma once

#include "svm/errors.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace svm {

/// Tridiagonal system with sub/main/super diagonals; lower[0] and upper[n-1]
/// are the cyclic corner entries when solved periodically.
template <class T>
struct Tridiagonal {
    std::vector<T> lower;
    std::vector<T> diag;
    std::vector<T> upper;

    explicit Tridiagonal(std::size_t n = 0) : lower(n), diag(n), upper(n) {}
    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }

    /// y = A x (cyclic corners used only when `periodic`).
    void multiply(std::span<const T> x, std::span<T> y, bool periodic) const {
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i) {
            T acc = diag[i] * x[i];
            if (i > 0) acc += lower[i] * x[i - 1];
            else if (periodic) acc += lower[0] * x[n - 1];
            if (i + 1 < n) acc += upper[i] * x[i + 1];
            else if (periodic) acc += upper[n - 1] * x[0];
            y[i] = acc;
        }
    }
};

/// Thomas algorithm; overwrites `rhs` with the solution. No pivoting, so the
/// matrix must be diagonally dominant or otherwise safe for elimination.
template <class T>
void solve_tridiagonal(const Tridiagonal<T>& a, std::span<T> rhs) {
    const std::size_t n = a.size();
    if (n == 0) return;
    std::vector<T> c(n);
    T beta = a.diag[0];
    if (std::abs(beta) == 0.0) throw Error("singular tridiagonal system");
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        c[i] = a.upper[i - 1] / beta;
        beta = a.diag[i] - a.lower[i] * c[i];
        if (std::abs(beta) == 0.0) throw Error("singular tridiagonal system");
        rhs[i] = (rhs[i] - a.lower[i] * rhs[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i + 1] * rhs[i + 1];
}

/// Cyclic tridiagonal solve by the Sherman-Morrison correction.
template <class T>
void solve_cyclic_tridiagonal(const Tridiagonal<T>& a, std::span<T> rhs) {
    const std::size_t n = a.size();
    if (n < 3) throw InvalidArgument("cyclic tridiagonal system needs at least 3 unknowns");
    const T alpha = a.upper[n - 1];  // A(n-1, 0)
    const T beta = a.lower[0];       // A(0, n-1)
    const T gamma = -a.diag[0];

    Tridiagonal<T> b = a;
    b.diag[0] -= gamma;
    b.diag[n - 1] -= alpha * beta / gamma;

    std::vector<T> x(rhs.begin(), rhs.end());
    solve_tridiagonal<T>(b, x);
    std::vector<T> u(n, T{});
    u[0] = gamma;
    u[n - 1] = alpha;
    solve_tridiagonal<T>(b, u);
    const T fact = (x[0] + beta * x[n - 1] / gamma) / (T{1} + u[0] + beta * u[n - 1] / gamma);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = x[i] - fact * u[i];
}

}  // namespace svm
