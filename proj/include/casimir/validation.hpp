#pragma once

// Brute-force reference values. Nothing here calls the adaptive engine:
// integrals are composite Simpson or midpoint sums, and the integrands are
// written out from the raw exponential forms rather than the guarded helpers.
// Slow by design; used by the tests and by --verify.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/core.hpp"
#include "casimir/force.hpp"
#include "casimir/modulation.hpp"
#include "casimir/observables.hpp"
#include "casimir/parallel.hpp"
#include "casimir/scattering.hpp"

namespace casimir {

struct OracleReport {
    std::string quantity;
    double oracle = 0.0;
    double main = 0.0;
    double rel_diff = 0.0;
    std::string resolution;
    bool passed = false;
};

inline double relative_difference(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// Composite Simpson with an even number of panels.
template <class F>
auto simpson(F&& f, double a, double b, long panels) {
    if (panels < 2 || panels % 2 != 0) throw std::invalid_argument("simpson: panels must be even and >= 2");
    const double h = (b - a) / static_cast<double>(panels);
    using T = decltype(f(a));
    T odd{}, even{};
    for (long i = 1; i < panels; ++i) {
        const double x = a + h * static_cast<double>(i);
        if (i % 2) odd += f(x);
        else even += f(x);
    }
    return (f(a) + f(b) + 4.0 * odd + 2.0 * even) * (h / 3.0);
}

struct OracleValue {
    double value = 0.0;
    double doubled = 0.0;  ///< rerun at twice the panel count
    long panels = 0;
    bool converged = false;

    double change() const { return relative_difference(value, doubled); }
};

/// Simpson at `panels`, accepted only if doubling the panels moves the value
/// by at most `target` (relative, or absolute when the value is ~0).
template <class F>
OracleValue oracle_integral_1d(F&& f, double a, double b, long panels, double target) {
    OracleValue o;
    o.panels = panels;
    o.value = simpson(f, a, b, panels);
    o.doubled = simpson(f, a, b, 2 * panels);
    const double d = std::abs(o.value - o.doubled);
    o.converged = d <= target * std::max(std::abs(o.doubled), 1e-300) || d == 0.0;
    return o;
}

/// Midpoint sum over [x0,x1]x[y0,y1] on an nx-by-ny grid.
template <class F>
cplx midpoint_2d(F&& f, double x0, double x1, double y0, double y1, long nx, long ny, unsigned threads = 1) {
    const double hx = (x1 - x0) / static_cast<double>(nx);
    const double hy = (y1 - y0) / static_cast<double>(ny);
    std::vector<cplx> rows(static_cast<std::size_t>(nx));
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        const double x = x0 + hx * (static_cast<double>(i) + 0.5);
        cplx acc{};
        for (long j = 0; j < ny; ++j) acc += f(x, y0 + hy * (static_cast<double>(j) + 0.5));
        rows[i] = acc;
    });
    cplx s{};
    for (const auto& r : rows) s += r;
    return s * (hx * hy);
}

/// Midpoint at h and 2h combined by one Richardson step. `change` is the
/// h -> 2h difference, the resolution evidence kept in reports.
struct Oracle2d {
    cplx value{};
    cplx coarse{};
    cplx fine{};
    double change() const { return std::abs(fine - coarse) / std::max(std::abs(fine), 1e-300); }
};

template <class F>
Oracle2d oracle_integral_2d(F&& f, double x0, double x1, double y0, double y1, long nx, long ny, unsigned threads = 1) {
    Oracle2d o;
    o.coarse = midpoint_2d(f, x0, x1, y0, y1, nx, ny, threads);
    o.fine = midpoint_2d(f, x0, x1, y0, y1, 2 * nx, 2 * ny, threads);
    o.value = (4.0 * o.fine - o.coarse) / 3.0;
    return o;
}

// ---------------------------------------------------------------------------
// Spectrum and totals, transcribed with |1 - e^{2ixL}|^2 kept explicit.

namespace oracle_detail {

inline double abs2_one_minus(double x, double L) { return std::norm(1.0 - std::polar(1.0, 2.0 * x * L)); }

}  // namespace oracle_detail

/// n(w) by Simpson over [0, cutoff].
inline OracleValue oracle_spectrum(const CavityConfig& cfg, const ModulationProfile& p, double omega, long panels,
                                   double target = 1e-8) {
    const double L = cfg.length();
    auto g = [&](double wp) {
        if (wp == 0.0) return 0.0;
        return std::norm(p.fourier(omega + wp)) * oracle_detail::abs2_one_minus(wp, L) / wp;
    };
    auto o = oracle_integral_1d(g, 0.0, cfg.cutoff(), panels, target);
    const double pref = cfg.lambda0() * cfg.lambda0() / (4.0 * omega) * oracle_detail::abs2_one_minus(omega, L);
    o.value *= pref;
    o.doubled *= pref;
    return o;
}

/// Monochromatic N (moment 0) or P (moment 1) by Simpson over [0, drive].
inline OracleValue oracle_monochromatic(const CavityConfig& cfg, double drive, int moment, long panels,
                                        double target = 1e-9) {
    const double L = cfg.length();
    auto g = [&](double w) {
        if (w == 0.0 || w == drive) return 0.0;
        const double body = oracle_detail::abs2_one_minus(w, L) * oracle_detail::abs2_one_minus(drive - w, L) /
                            (4.0 * (drive - w));
        return moment == 0 ? body / w : body;
    };
    auto o = oracle_integral_1d(g, 0.0, drive, panels, target);
    const double l2 = cfg.lambda0() * cfg.lambda0();
    o.value *= l2;
    o.doubled *= l2;
    return o;
}

// ---------------------------------------------------------------------------
// Force integrals, transcribed from the raw bracketed expressions.

/// First-order force by Simpson on each of the two w' ranges.
inline cplx oracle_force1(const CavityConfig& cfg, const ModulationProfile& p, Mirror mirror, double w, long panels) {
    const double L = cfg.length();
    const double cut = cfg.cutoff();
    auto E = [](double th) { return std::polar(1.0, th); };
    auto upper = [&](double wp) -> cplx {
        if (mirror == Mirror::left) return (E((2 * wp - w) * L) - 1.0) - E(w * L) * (1.0 - E(2 * (wp - w) * L));
        return (1.0 - E(2 * (wp - w) * L)) + (1.0 - E(2 * wp * L)) * (E(2 * (w - wp) * L) - 1.0) -
               E(2 * wp * L) * (1.0 - E(-2 * (wp - w) * L));
    };
    auto full = [&](double wp) -> cplx {
        if (mirror == Mirror::left) return E(w * L) * (1.0 - E(-2 * wp * L)) - E(-(w + 2 * wp) * L) * (1.0 - E(2 * wp * L));
        return E(2 * (w - wp) * L) * (1.0 - E(2 * wp * L)) - (E(-2 * wp * L) - 1.0) * (1.0 - E(2 * wp * L)) -
               (1.0 - E(-2 * wp * L));
    };
    const cplx a = simpson(upper, w, cut, panels);
    const cplx b = simpson(full, 0.0, cut, panels);
    return cfg.lambda0() * p.fourier(w) / cplx(0.0, 4.0) * (a + b) / (2.0 * pi);
}

/// One displayed second-order term (index 0..2) by Richardson-midpoint on
/// the same truncated domain the engine uses. Midpoint nodes never land on
/// w'' = 0 or w' = w for the grids used here, so the raw quotients are safe.
inline Oracle2d oracle_force2_term(const CavityConfig& cfg, const ModulationProfile& p, Mirror mirror, int term, double w,
                                   long nx, long ny, unsigned threads = 1) {
    const double L = cfg.length();
    const double cut = cfg.cutoff();
    auto E = [](double th) { return std::polar(1.0, th); };
    auto f = [&](double x) { return p.fourier(x); };
    const double c = 1.0 / (4.0 * pi * pi);
    const double lam2 = cfg.lambda0() * cfg.lambda0();
    cplx pref;
    double x0 = 0.0, x1 = cut, y0 = -cut, y1 = cut;
    std::function<cplx(double, double)> g;

    if (term == 0) {
        x0 = -cut;
        x1 = cut;
        y0 = 0.0;
        y1 = cut;
        if (mirror == Mirror::left) {
            pref = -lam2 * f(w) * E(w * L) / 4.0 * c;
            g = [&](double a, double b) { return f(a - b) * (2.0 - E(2 * b * L) - E(-2 * b * L)) / b; };
        } else {
            pref = lam2 * f(w) / 4.0 * c;
            g = [&](double a, double b) {
                const cplx q = (2.0 - E(2 * b * L) - E(-2 * b * L)) / b;
                return f(a - b) * (q - (2.0 - E(2 * a * L) - E(-2 * a * L)) * q *
                                           (2.0 - E(2 * (w - a) * L) - E(-2 * (w - a) * L)));
            };
        }
    } else if (mirror == Mirror::left && term == 1) {
        pref = -lam2 / 8.0 * c;
        g = [&](double a, double b) {
            return f(w - a - b) * f(a + b) *
                   (E(w * L) * (1.0 - E(2 * b * L)) * (1.0 - E(-2 * a * L)) / (a * b) +
                    E((w - 2 * a + 2 * b) * L) * (E(2 * a * L) - 1.0) * (E(-2 * b * L) - 1.0) / (a * b));
        };
    } else if (mirror == Mirror::left && term == 2) {
        pref = lam2 / 8.0 * c;
        x1 = w;
        g = [&](double a, double b) {
            return f(a - b) * f(w - a + b) *
                   (E(w * L) * (1.0 - E(2 * b * L)) * (1.0 - E(2 * (a - w) * L)) / (b * (a - w)) -
                    E((4 * a + 2 * b - 3 * w) * L) * (E(-2 * b * L) - 1.0) * (E(-2 * (a - w) * L) - 1.0) / (b * (a - w)));
        };
    } else if (mirror == Mirror::right && term == 1) {
        pref = -lam2 / 8.0 * c;
        x0 = w;
        g = [&](double a, double b) {
            const double d = w - a;
            return f(a - b) * f(w - a + b) *
                   (E(2 * (a + b) * L) * (E(-2 * b * L) - 1.0) * (E(-2 * (a - w) * L) - 1.0) / (b * d) -
                    (E(2 * d * L) * (1.0 - E(2 * a * L)) * (1.0 - E(2 * b * L)) * (1.0 - E(2 * d * L)) / (b * d) +
                     (1.0 - E(2 * b * L)) * (1.0 - E(-2 * d * L)) / (b * d)));
        };
    } else if (mirror == Mirror::right && term == 2) {
        pref = lam2 / 8.0 * c;
        g = [&](double a, double b) {
            return f(w - a - b) * f(a + b) *
                   (E(2 * (w - a + b) * L) * (E(2 * a * L) - 1.0) * (E(-2 * b * L) - 1.0) / (a * b) +
                    E(2 * a * L) * (1.0 - E(2 * (w - a) * L)) * (E(2 * a * L) - 1.0) * (E(2 * b * L) - 1.0) / (a * b) +
                    (E(-2 * a * L) - 1.0) * (E(2 * b * L) - 1.0) / (a * b));
        };
    } else {
        throw std::invalid_argument("oracle_force2_term: term must be 0, 1 or 2");
    }
    if (x1 <= x0) return {};
    auto o = oracle_integral_2d(g, x0, x1, y0, y1, nx, ny, threads);
    o.value *= pref;
    o.coarse *= pref;
    o.fine *= pref;
    return o;
}

// ---------------------------------------------------------------------------
// Cross-formula checks.

/// emission_spectrum against the trace route at `samples` random frequencies
/// in (0, 10 pi / L), plus the first resonance. Both paths are compared
/// relatively; values below 1e-10 of the largest sampled spectrum count as zero.
inline std::vector<OracleReport> cross_check_spectrum(const CavityConfig& cfg, const ModulationProfile& p, int samples,
                                                      std::uint64_t seed = 20240611, double tol = 1e-6,
                                                      unsigned threads = 1) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, std::min(cfg.cutoff(), 10.0 * pi / cfg.length()));
    std::vector<double> omegas;
    for (int i = 0; i < samples; ++i) {
        double w = dist(rng);
        while (w == 0.0) w = dist(rng);
        omegas.push_back(w);
    }
    omegas.push_back(pi / cfg.length());

    const ScatteringKernels k(cfg, p);
    std::vector<OracleReport> out(omegas.size());
    parallel_for(omegas.size(), threads, [&](std::size_t i) {
        const double w = omegas[i];
        auto& r = out[i];
        std::ostringstream q;
        q.precision(17);
        q << "n(" << w << ")";
        r.quantity = q.str();
        r.oracle = spectrum_from_kernels(k, w);
        r.main = emission_spectrum(cfg, p, w);
        r.resolution = "trace route, adaptive";
    });
    double scale = 0.0;
    for (const auto& r : out) scale = std::max({scale, std::abs(r.oracle), std::abs(r.main)});
    for (auto& r : out) {
        r.rel_diff = relative_difference(r.oracle, r.main);
        const bool both_zero = std::max(std::abs(r.oracle), std::abs(r.main)) <= 1e-10 * scale;
        r.passed = r.rel_diff <= tol || both_zero;
    }
    return out;
}

struct TrendRow {
    double cutoff = 0.0;
    double decay_time = 0.0;
    double impulse2 = 0.0;
    double minus_p = 0.0;
    double ratio = NAN;  ///< NaN when both sides vanish
};

struct TrendReport {
    std::vector<TrendRow> rows;
    bool monotone = true;  ///< |ratio - 1| non-increasing along every cutoff and decay-time line
    std::string status;    ///< "PASS", "WARN" or "N/A"
};

/// Second-order total impulse against minus the radiated momentum of the
/// same pulse, over a (cutoff x decay time) table. A non-monotone approach
/// to 1 is a WARN, not an error.
inline TrendReport momentum_conservation_trend(const CavityConfig& cfg, const ModulationProfile& p,
                                               std::vector<double> cutoffs, std::vector<double> decay_times,
                                               const QuadratureSpec& spec = {}, unsigned threads = 1) {
    const auto* dc = std::get_if<DampedCosine>(&p.variant());
    if (!dc) throw std::invalid_argument("momentum_conservation_trend: requires a damped-cosine profile");
    std::sort(cutoffs.begin(), cutoffs.end());
    std::sort(decay_times.begin(), decay_times.end());
    TrendReport rep;
    rep.rows.resize(cutoffs.size() * decay_times.size());
    parallel_for(rep.rows.size(), threads, [&](std::size_t idx) {
        const double T = decay_times[idx / cutoffs.size()];
        const double cut = cutoffs[idx % cutoffs.size()];
        const CavityConfig c = cfg.with_cutoff(cut);
        const ModulationProfile pr(DampedCosine{dc->drive_frequency, T});
        auto& row = rep.rows[idx];
        row.cutoff = cut;
        row.decay_time = T;
        row.impulse2 = (force2(c, pr, Mirror::left, 0.0, spec).value + force2(c, pr, Mirror::right, 0.0, spec).value).real();
        row.minus_p = -radiated_momentum(c, pr, spec);
        if (row.impulse2 != 0.0 || row.minus_p != 0.0) row.ratio = row.impulse2 / row.minus_p;
    });
    bool any = false;
    auto dev = [](const TrendRow& r) { return std::abs(r.ratio - 1.0); };
    for (std::size_t t = 0; t < decay_times.size(); ++t) {
        for (std::size_t c = 0; c < cutoffs.size(); ++c) {
            const auto& r = rep.rows[t * cutoffs.size() + c];
            if (std::isnan(r.ratio)) continue;
            any = true;
            if (c > 0 && dev(r) > dev(rep.rows[t * cutoffs.size() + c - 1])) rep.monotone = false;
            if (t > 0 && dev(r) > dev(rep.rows[(t - 1) * cutoffs.size() + c])) rep.monotone = false;
        }
    }
    rep.status = !any ? "N/A" : (rep.monotone ? "PASS" : "WARN");
    return rep;
}

}  // namespace casimir
