#pragma once

// Second-order emission spectrum, radiated totals for a monochromatic drive,
// and propelling efficiencies.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/core.hpp"
#include "casimir/modulation.hpp"
#include "casimir/parallel.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/scattering.hpp"

namespace casimir {

class ZeroRadiation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyBand : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// n(omega) sampled on a grid. Values are clamped to be non-negative.
struct SpectralDensity {
    FrequencyGrid grid;
    std::vector<double> values;

    double max_value() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }
};

/// Radiated particle number, energy and momentum. All quanta move right,
/// so energy and momentum share one integrand and are stored identically.
struct RadiationTotals {
    double particle_number = 0.0;
    double energy = 0.0;
    double momentum = 0.0;
};

namespace detail {

inline void require_dirichlet(const CavityConfig& cfg, const char* who) {
    if (!cfg.dirichlet())
        throw std::invalid_argument(std::string(who) + ": only the Dirichlet left mirror has a closed spectrum");
}

inline QuadratureSpec with_cavity_hint(const CavityConfig& cfg, const QuadratureSpec& spec) {
    return spec.oscillation_period_hint ? spec : cavity_spec(cfg, spec);
}

}  // namespace detail

/// n(w) = (lambda0^2 / 4w) |1 - e^{2iwL}|^2 int_0^cutoff dw' |f[w + w']|^2 |1 - e^{2iw'L}|^2 / w'.
/// Both sin^2/w factors use guarded_sinc_sq; lambda0^2 multiplies the finished
/// integral so the result scales exactly quadratically.
inline double emission_spectrum(const CavityConfig& cfg, const ModulationProfile& p, double omega,
                                const QuadratureSpec& spec = {}) {
    detail::require_dirichlet(cfg, "emission_spectrum");
    if (!(omega >= 0.0) || !std::isfinite(omega)) throw std::invalid_argument("emission_spectrum: omega must be >= 0");
    const double lam = cfg.lambda0();
    if (lam == 0.0 || omega == 0.0) return 0.0;
    const double L = cfg.length();
    const auto q = detail::with_cavity_hint(cfg, spec);
    auto integrand = [&](double wp) { return p.power(omega + wp) * L * guarded_sinc_sq(wp * L); };
    const auto breaks = p.line_breakpoints(-omega);
    const auto r = integrate_semi_infinite(integrand, 0.0, cfg.cutoff(), q, breaks);
    const double value = 0.25 * L * guarded_sinc_sq(omega * L) * r.value;
    return std::max(0.0, value) * (lam * lam);
}

/// Trace-formula route to the same spectrum, built only from the order-1
/// kernel: n(w) = int_{-cutoff}^0 dw' (w/|w'|) Tr(S1[-w,-w'] S1^T[w,w']).
/// With S[-w,-w'] = conj(S[w,w']) the trace is |S1[w,w']|^2.
inline double spectrum_from_kernels(const ScatteringKernels& k, double omega, const QuadratureSpec& spec = {}) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("spectrum_from_kernels: omega must be > 0");
    const auto& cfg = k.config();
    if (cfg.lambda0() == 0.0) return 0.0;
    const auto q = detail::with_cavity_hint(cfg, spec);
    auto integrand = [&](double wp) -> double {
        if (wp == 0.0) return 0.0;
        const Matrix2c tr = k.order1(-omega, -wp) * k.order1(omega, wp).transpose();
        return omega / std::abs(wp) * tr.trace().real();
    };
    auto breaks = k.profile().line_breakpoints(-omega);
    for (double& b : breaks) b = -b;
    const auto r = integrate_1d(integrand, -cfg.cutoff(), 0.0, q, breaks);
    return std::max(0.0, r.value);
}

/// Spectrum on a grid, evaluated point-wise in parallel.
inline SpectralDensity compute_spectrum(const CavityConfig& cfg, const ModulationProfile& p, const FrequencyGrid& grid,
                                        const QuadratureSpec& spec = {}, unsigned threads = 1) {
    SpectralDensity s{grid, std::vector<double>(grid.size(), 0.0)};
    parallel_for(grid.size(), threads, [&](std::size_t i) { s.values[i] = emission_spectrum(cfg, p, grid.points[i], spec); });
    return s;
}

/// Totals for the idealised monochromatic drive (Omega T -> infinity):
///   N = int_0^Omega dw 4 lambda0^2 sin^2(wL) sin^2((Omega-w)L) / (w (Omega-w)),
///   P = same integrand times w.
inline RadiationTotals monochromatic_totals(const CavityConfig& cfg, double drive, const QuadratureSpec& spec = {}) {
    detail::require_dirichlet(cfg, "monochromatic_totals");
    if (!(drive > 0.0) || !std::isfinite(drive))
        throw std::invalid_argument("monochromatic_totals: drive frequency must be positive");
    const double L = cfg.length();
    const double lam2 = cfg.lambda0() * cfg.lambda0();
    const auto q = detail::with_cavity_hint(cfg, spec);
    auto number = [&](double w) { return 0.25 * L * L * guarded_sinc_sq(w * L) * guarded_sinc_sq((drive - w) * L); };
    auto momentum = [&](double w) {
        const double s = std::sin(w * L);
        return L * s * s * guarded_sinc_sq((drive - w) * L);
    };
    const double n = integrate_1d(number, 0.0, drive, q).value;
    const double pm = integrate_1d(momentum, 0.0, drive, q).value;
    RadiationTotals t;
    t.particle_number = lam2 * n;
    t.momentum = lam2 * pm;
    t.energy = t.momentum;
    return t;
}

struct SweepRow {
    double drive = 0.0;
    RadiationTotals totals{};
    std::optional<std::string> error{};
};

/// monochromatic_totals for each drive frequency; a failing point is
/// reported in its row and the sweep continues.
inline std::vector<SweepRow> sweep_totals(const CavityConfig& cfg, const std::vector<double>& drives,
                                          const QuadratureSpec& spec = {}, unsigned threads = 1) {
    for (std::size_t i = 0; i < drives.size(); ++i) {
        if (!(drives[i] > 0.0)) throw std::invalid_argument("sweep_totals: drive frequencies must be positive");
        if (i > 0 && !(drives[i] > drives[i - 1])) throw std::invalid_argument("sweep_totals: drives must be increasing");
    }
    std::vector<SweepRow> rows(drives.size());
    parallel_for(drives.size(), threads, [&](std::size_t i) {
        rows[i].drive = drives[i];
        try {
            rows[i].totals = monochromatic_totals(cfg, drives[i], spec);
        } catch (const std::exception& e) {
            rows[i].error = e.what();
        }
    });
    return rows;
}

/// Total radiated momentum of the finite pulse, P = int_0^cutoff dw w n(w).
inline double radiated_momentum(const CavityConfig& cfg, const ModulationProfile& p, const QuadratureSpec& spec = {}) {
    const auto q = detail::with_cavity_hint(cfg, spec);
    if (cfg.lambda0() == 0.0) return 0.0;
    const auto unit = cfg.with_lambda0(1.0);
    auto integrand = [&](double w) { return w * emission_spectrum(unit, p, w, q); };
    const auto breaks = p.line_breakpoints(0.0);
    const double lam = cfg.lambda0();
    return lam * lam * integrate_1d(integrand, 0.0, cfg.cutoff(), q, breaks).value;
}

namespace detail {

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

inline void check_k(double k) {
    if (!(k > 0.0 && k <= 1.0)) throw std::invalid_argument("efficiency: k must lie in (0, 1]");
}

}  // namespace detail

/// eta = k |int (n_L - n_R)| / int (n_L + n_R), trapezoid on the shared grid.
/// The efficiency is |P|/W, so only the size of the spectral imbalance counts:
/// a one-sided spectrum gives k whichever side it leaves from.
inline double efficiency_two_sided(const SpectralDensity& left, const SpectralDensity& right, double k) {
    detail::check_k(k);
    if (left.grid.points != right.grid.points || left.values.size() != left.grid.size() ||
        right.values.size() != right.grid.size())
        throw std::invalid_argument("efficiency_two_sided: spectra must share one grid");
    std::vector<double> diff(left.values.size());
    std::vector<double> sum(left.values.size());
    for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = left.values[i] - right.values[i];
        sum[i] = left.values[i] + right.values[i];
    }
    const double den = detail::trapezoid(left.grid.points, sum);
    if (!(den > 0.0)) throw ZeroRadiation("efficiency_two_sided: no radiation in either spectrum");
    return k * std::abs(detail::trapezoid(left.grid.points, diff)) / den;
}

struct Band {
    double lo;
    double hi;
};

/// Massive-field efficiency k int sqrt(w^2 - m^2) dw / int w dw over a band
/// with lo >= m. Without a weight the closed-form antiderivative is used;
/// with a spectrum both integrands are weighted by n(w) (trapezoid on the
/// spectrum's grid points inside the band).
inline double efficiency_massive(double m, double k, Band band, const SpectralDensity* weight = nullptr) {
    detail::check_k(k);
    if (!(m >= 0.0) || !std::isfinite(m)) throw std::invalid_argument("efficiency_massive: mass must be >= 0");
    if (!(band.hi > band.lo)) throw EmptyBand("efficiency_massive: band is empty");
    if (m >= band.hi) throw EmptyBand("efficiency_massive: no propagating modes below the band top");
    if (band.lo < m) throw std::invalid_argument("efficiency_massive: band must start at or above the mass");

    if (!weight) {
        if (m == 0.0) return k;
        auto antideriv = [m](double w) {
            const double r = std::sqrt(std::max(0.0, w * w - m * m));
            return 0.5 * (w * r - m * m * std::log(w + r));
        };
        const double num = antideriv(band.hi) - antideriv(band.lo);
        const double den = 0.5 * (band.hi * band.hi - band.lo * band.lo);
        return k * num / den;
    }

    std::vector<double> x, num, den;
    for (std::size_t i = 0; i < weight->grid.size(); ++i) {
        const double w = weight->grid.points[i];
        if (w < band.lo || w > band.hi) continue;
        x.push_back(w);
        num.push_back(weight->values[i] * std::sqrt(std::max(0.0, w * w - m * m)));
        den.push_back(weight->values[i] * w);
    }
    if (x.size() < 2) throw EmptyBand("efficiency_massive: weight spectrum has fewer than two points in the band");
    const double d = detail::trapezoid(x, den);
    if (!(d > 0.0)) throw ZeroRadiation("efficiency_massive: weight spectrum vanishes in the band");
    return k * detail::trapezoid(x, num) / d;
}

}  // namespace casimir
