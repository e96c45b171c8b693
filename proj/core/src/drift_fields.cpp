#include "svm/drift_fields.hpp"

#include "svm/errors.hpp"
#include "svm/finite_difference.hpp"
#include "svm/madelung.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace svm {

GridField osmotic_velocity(const DensityEstimate& rho, double nu) {
    const auto values = rho.base.values();
    const std::size_t n = values.size();
    const double peak = *std::max_element(values.begin(), values.end());
    std::vector<double> log_rho(n, 0.0);
    std::vector<std::uint8_t> ok(n);
    for (std::size_t i = 0; i < n; ++i) {
        ok[i] = rho.base.valid(i) && values[i] > 0.0 && values[i] >= density_floor * peak;
        if (ok[i]) log_rho[i] = std::log(values[i]);
    }
    std::vector<double> grad(n);
    std::vector<std::uint8_t> grad_ok;
    fd::gradient(log_rho, rho.grid().dx(), rho.grid().periodic, ok, grad, grad_ok);
    for (double& g : grad) g *= nu;
    return GridField(rho.grid(), std::move(grad), std::move(grad_ok), rho.time());
}

namespace {

GridField combine(const GridField& a, const GridField& b, double wa, double wb, const char* who) {
    require_same_grid(a.grid(), b.grid(), who);
    const std::size_t n = a.size();
    std::vector<double> out(n);
    std::vector<std::uint8_t> ok(n);
    for (std::size_t i = 0; i < n; ++i) {
        ok[i] = a.valid(i) && b.valid(i);
        out[i] = ok[i] ? wa * a[i] + wb * b[i] : 0.0;
    }
    return GridField(a.grid(), std::move(out), std::move(ok), a.time() ? a.time() : b.time());
}

}  // namespace

GridField consistency_transform(const GridField& u, const DensityEstimate& rho, double nu) {
    if (!(nu >= 0.0)) throw InvalidArgument("consistency_transform: nu must be >= 0");
    return combine(u, osmotic_velocity(rho, nu), 1.0, -2.0, "consistency_transform");
}

GridField mean_velocity(const GridField& u, const GridField& u_tilde) {
    return combine(u, u_tilde, 0.5, 0.5, "mean_velocity");
}

DriftTriple drifts_from_wavefunction(const WaveFunction& psi, double nu) {
    MadelungFields m = madelung_decompose(psi);
    // v = 2 nu grad theta with the caller's nu (psi.nu() unless overridden).
    GridField v = m.v;
    if (nu != psi.nu()) {
        auto& vals = v.mutable_values();
        for (double& x : vals) x *= nu / psi.nu();
    }
    const GridField osm = osmotic_velocity(m.rho, nu);
    GridField u = combine(v, osm, 1.0, 1.0, "drifts_from_wavefunction");
    GridField ut = combine(v, osm, 1.0, -1.0, "drifts_from_wavefunction");
    return DriftTriple{std::move(u), std::move(ut), std::move(v), std::move(m.rho)};
}

DriftSpec drift_from_field(const GridField& field, std::string label) {
    auto f = std::make_shared<const GridField>(field.filled());
    return DriftSpec::scalar([f](double x, double) { return f->interpolate(x); }, std::move(label));
}

DriftSpec drift_from_series(const FieldSeries& series, std::string label) {
    if (series.empty()) throw InvalidArgument("drift_from_series: empty series");
    auto s = std::make_shared<FieldSeries>();
    s->snapshots.reserve(series.size());
    for (const auto& snap : series.snapshots) s->snapshots.push_back(snap.filled());
    if (s->size() == 1) {
        auto only = std::make_shared<const GridField>(s->snapshots.front());
        return DriftSpec::scalar([only](double x, double) { return only->interpolate(x); }, std::move(label));
    }
    return DriftSpec::scalar([s](double x, double t) { return s->interpolate(x, t); }, std::move(label));
}

}  // namespace svm
