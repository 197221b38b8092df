#pragma once

// Frequency-domain radiation-pressure force on the two cavity mirrors at
// orders lambda0 and lambda0^2. Axis convention: x points right, so a
// negative total impulse is a left-pointing propelling force.
//
// Every frequency integral that would run to infinity stops at the physical
// cutoff of the configuration (integrals over the whole line use
// [-cutoff, cutoff]); results are only meaningful together with that cutoff.
// Quotients such as (1 - e^{2iwL})/w are evaluated with expm1i_over, and
// (2 - e^{2iwL} - e^{-2iwL})/w = 4 sin^2(wL)/w with guarded_sinc_sq.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/core.hpp"
#include "casimir/modulation.hpp"
#include "casimir/observables.hpp"
#include "casimir/parallel.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/scattering.hpp"

namespace casimir {

enum class Mirror { left, right };

inline const char* to_string(Mirror m) { return m == Mirror::left ? "left" : "right"; }

/// diag(1, -1): weights right- against left-moving momentum flux.
inline Matrix2c eta_matrix() {
    Matrix2c m = Matrix2c::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

/// Momentum flux of a single-frequency amplitude pair, w^2 Tr[eta Phi Phi^dagger]
/// = w^2 (|phi|^2 - |psi|^2).
inline double momentum_flux(const ComplexAmplitudePair& a, double omega) {
    Eigen::Vector2cd v(a.right_moving, a.left_moving);
    const Matrix2c outer = v * v.adjoint();
    return omega * omega * (eta_matrix() * outer).trace().real();
}

struct TermValue {
    cplx value{};
    double error = 0.0;
};

/// Order-2 force with each displayed term kept for inspection.
struct Force2Result {
    cplx value{};
    std::array<TermValue, 3> terms{};
    double error() const { return terms[0].error + terms[1].error + terms[2].error; }
};

namespace detail {

inline void check_force_inputs(const CavityConfig& cfg, double omega, const char* who) {
    if (!cfg.dirichlet()) throw std::invalid_argument(std::string(who) + ": requires the Dirichlet left mirror");
    if (!std::isfinite(omega) || !(std::abs(omega) < cfg.cutoff()))
        throw std::invalid_argument(std::string(who) + ": |omega| must lie below the cutoff");
}

inline QuadratureSpec force_spec(const CavityConfig& cfg, const QuadratureSpec& spec) {
    return with_cavity_hint(cfg, spec).with_reference(ToleranceReference::magnitude);
}

// sign * (shift + c +- k*width) for every spectral line c of the profile.
inline std::vector<double> lines(const ModulationProfile& p, double shift, double sign) {
    auto b = p.line_breakpoints(shift);
    for (double& x : b) x *= sign;
    return b;
}

inline void append(std::vector<double>& to, const std::vector<double>& from) { to.insert(to.end(), from.begin(), from.end()); }

// Integral over [lo, hi] for either orientation, zero when empty.
template <class F>
TermValue signed_2d(F&& f, double lo, double hi, Range inner, const QuadratureSpec& spec,
                    const std::vector<double>& outer_breaks, const auto& inner_breaks) {
    if (lo == hi) return {};
    const double sgn = lo < hi ? 1.0 : -1.0;
    const Range outer{std::min(lo, hi), std::max(lo, hi)};
    const auto r = integrate_2d(f, outer, inner, spec, outer_breaks, inner_breaks);
    return {sgn * r.value, r.error_estimate};
}

}  // namespace detail

/// First-order force F1[omega] on one mirror:
///   F1[w,-L] = (lambda0 f[w] / 4i) ( int_w^cut dw'/2pi A + int_0^cut dw'/2pi B ),
///   F1[w, 0] = (lambda0 f[w] / 4i) ( int_w^cut dw'/2pi C + int_0^cut dw'/2pi D ),
/// with the bracketed integrands exactly as derived for each mirror.
inline cplx force1(const CavityConfig& cfg, const ModulationProfile& p, Mirror mirror, double omega,
                   const QuadratureSpec& spec = {}) {
    detail::check_force_inputs(cfg, omega, "force1");
    const double lam = cfg.lambda0();
    if (lam == 0.0) return {};
    const double L = cfg.length();
    const double w = omega;
    const double cut = cfg.cutoff();
    auto q = detail::force_spec(cfg, spec);
    // brackets are sums of unit-modulus exponentials that cancel identically at
    // some w (left mirror, w = (k + 1/2) pi / L); nothing below eps-level is resolvable
    q.abs_tol = std::max(q.abs_tol, 64.0 * std::numeric_limits<double>::epsilon() * cut);

    std::function<cplx(double)> upper;  // on [w, cut]
    std::function<cplx(double)> full;   // on [0, cut]
    if (mirror == Mirror::left) {
        upper = [=](double wp) {
            return (expi((2.0 * wp - w) * L) - 1.0) - expi(w * L) * (1.0 - expi(2.0 * (wp - w) * L));
        };
        full = [=](double wp) {
            return expi(w * L) * (1.0 - expi(-2.0 * wp * L)) - expi(-(w + 2.0 * wp) * L) * (1.0 - expi(2.0 * wp * L));
        };
    } else {
        upper = [=](double wp) {
            return (1.0 - expi(2.0 * (wp - w) * L)) + (1.0 - expi(2.0 * wp * L)) * (expi(2.0 * (w - wp) * L) - 1.0) -
                   expi(2.0 * wp * L) * (1.0 - expi(-2.0 * (wp - w) * L));
        };
        full = [=](double wp) {
            return expi(2.0 * (w - wp) * L) * (1.0 - expi(2.0 * wp * L)) -
                   (expi(-2.0 * wp * L) - 1.0) * (1.0 - expi(2.0 * wp * L)) - (1.0 - expi(-2.0 * wp * L));
        };
    }
    const cplx a = integrate_semi_infinite(upper, w, cut, q).value;
    const cplx b = integrate_semi_infinite(full, 0.0, cut, q).value;
    const cplx pref = p.fourier(w) / cplx{0.0, 4.0} / (2.0 * pi);
    return lam * (pref * (a + b));
}

/// Second-order force F2[omega] on one mirror, term by term. Terms carrying
/// a semi-infinite outer range use [0, cut] or [w, cut]; whole-line ranges use
/// [-cut, cut]. Outer variable w', inner w''.
inline Force2Result force2(const CavityConfig& cfg, const ModulationProfile& p, Mirror mirror, double omega,
                           const QuadratureSpec& spec = {}) {
    detail::check_force_inputs(cfg, omega, "force2");
    Force2Result out;
    const double lam = cfg.lambda0();
    if (lam == 0.0) return out;
    const double L = cfg.length();
    const double w = omega;
    const double cut = cfg.cutoff();
    const auto q = detail::force_spec(cfg, spec);
    const double inv4pi2 = 1.0 / (4.0 * pi * pi);
    const Range whole{-cut, cut};

    auto f = [&p](double x) { return p.fourier(x); };

    // f[w' - w''] only: lines at w'' = w' - c.
    auto breaks_single = [&](double wp) { return detail::lines(p, -wp, -1.0); };
    // f[w - w' - w''] f[w' + w'']: lines at w'' = c - w' and w'' = w - w' - c.
    auto breaks_sum = [&](double wp) {
        auto b = detail::lines(p, -wp, 1.0);
        detail::append(b, detail::lines(p, wp - w, -1.0));
        return b;
    };
    // f[w' - w''] f[w - w' + w'']: lines at w'' = w' - c and w'' = w' - w + c.
    auto breaks_diff = [&](double wp) {
        auto b = detail::lines(p, -wp, -1.0);
        detail::append(b, detail::lines(p, wp - w, 1.0));
        return b;
    };
    // Outer abscissae where a line enters or leaves the inner range.
    std::vector<double> outer_single = detail::lines(p, 0.0, 1.0);
    detail::append(outer_single, detail::lines(p, cut, 1.0));
    std::vector<double> outer_pair;
    for (double s : {cut, -cut}) {
        detail::append(outer_pair, detail::lines(p, s, 1.0));
        detail::append(outer_pair, detail::lines(p, s - w, -1.0));
        detail::append(outer_pair, detail::lines(p, -s - w, -1.0));
    }

    // Shared first term: the half-line inner integral of 4 sin^2(w''L)/w'' f[w'-w''].
    if (mirror == Mirror::left) {
        auto t1 = [&](double wp, double wpp) { return L * guarded_sinc_sq(wpp * L) * f(wp - wpp); };
        auto r1 = integrate_2d(t1, whole, Range{0.0, cut}, q, outer_single, breaks_single);
        const cplx pref1 = -p.fourier(w) * expi(w * L) / 4.0 * inv4pi2;
        out.terms[0] = {pref1 * r1.value, std::abs(pref1) * r1.error_estimate};

        auto t2 = [&](double wp, double wpp) {
            const cplx br = expi(w * L) * expm1i_over(wpp, 2.0 * L) * expm1i_over(wp, -2.0 * L) +
                            expi((w - 2.0 * wp + 2.0 * wpp) * L) * expm1i_over(wp, 2.0 * L) * expm1i_over(wpp, -2.0 * L);
            return f(w - wp - wpp) * f(wp + wpp) * br;
        };
        auto r2 = detail::signed_2d(t2, 0.0, cut, whole, q, outer_pair, breaks_sum);
        const double pref2 = -inv4pi2 / 8.0;
        out.terms[1] = {pref2 * r2.value, std::abs(pref2) * r2.error};

        // The first bracket reads (1 - e^{2i(w'-w)L}) so that the w' = w endpoint is removable.
        auto t3 = [&](double wp, double wpp) {
            const double d = wp - w;
            const cplx br = expi(w * L) * expm1i_over(wpp, 2.0 * L) * expm1i_over(d, 2.0 * L) -
                            expi((4.0 * wp + 2.0 * wpp - 3.0 * w) * L) * expm1i_over(wpp, -2.0 * L) *
                                expm1i_over(d, -2.0 * L);
            return f(wp - wpp) * f(w - wp + wpp) * br;
        };
        auto r3 = detail::signed_2d(t3, 0.0, w, whole, q, outer_pair, breaks_diff);
        const double pref3 = inv4pi2 / 8.0;
        out.terms[2] = {pref3 * r3.value, std::abs(pref3) * r3.error};
    } else {
        auto t1 = [&](double wp, double wpp) {
            const double sp = std::sin(wp * L);
            const double sd = std::sin((w - wp) * L);
            const double g = L * guarded_sinc_sq(wpp * L);
            return f(wp - wpp) * (g - 16.0 * sp * sp * g * sd * sd);
        };
        auto r1 = integrate_2d(t1, whole, Range{0.0, cut}, q, outer_single, breaks_single);
        const cplx pref1 = p.fourier(w) / 4.0 * inv4pi2;
        out.terms[0] = {pref1 * r1.value, std::abs(pref1) * r1.error_estimate};

        auto t2 = [&](double wp, double wpp) {
            const double d = w - wp;
            const cplx first = expi(2.0 * (wp + wpp) * L) * expm1i_over(wpp, -2.0 * L) * expm1i_over(d, 2.0 * L);
            const cplx second = expi(2.0 * d * L) * (1.0 - expi(2.0 * wp * L)) * expm1i_over(wpp, 2.0 * L) *
                                    expm1i_over(d, 2.0 * L) +
                                expm1i_over(wpp, 2.0 * L) * expm1i_over(d, -2.0 * L);
            return f(wp - wpp) * f(w - wp + wpp) * (first - second);
        };
        auto r2 = detail::signed_2d(t2, w, cut, whole, q, outer_pair, breaks_diff);
        const double pref2 = -inv4pi2 / 8.0;
        out.terms[1] = {pref2 * r2.value, std::abs(pref2) * r2.error};

        auto t3 = [&](double wp, double wpp) {
            const cplx br = expi(2.0 * (w - wp + wpp) * L) * expm1i_over(wp, 2.0 * L) * expm1i_over(wpp, -2.0 * L) +
                            expi(2.0 * wp * L) * (1.0 - expi(2.0 * (w - wp) * L)) * expm1i_over(wp, 2.0 * L) *
                                expm1i_over(wpp, 2.0 * L) +
                            expm1i_over(wp, -2.0 * L) * expm1i_over(wpp, 2.0 * L);
            return f(w - wp - wpp) * f(wp + wpp) * br;
        };
        auto r3 = detail::signed_2d(t3, 0.0, cut, whole, q, outer_pair, breaks_sum);
        const double pref3 = inv4pi2 / 8.0;
        out.terms[2] = {pref3 * r3.value, std::abs(pref3) * r3.error};
    }
    const double lam2 = lam * lam;
    for (auto& t : out.terms) {
        t.value *= lam2;
        t.error *= lam2;
    }
    out.value = out.terms[0].value + out.terms[1].value + out.terms[2].value;
    return out;
}

enum class ForceTarget { left, right, total };

/// F[omega] samples on a grid symmetric about zero, for one mirror (or the
/// sum) at one perturbative order, together with the cutoff used.
struct ForceSpectrum {
    ForceTarget target = ForceTarget::total;
    int order = 1;
    std::vector<double> omega;
    std::vector<cplx> values;
    double cutoff = 0.0;
};

/// Symmetric grid [-omega_max, omega_max] with the spacing rule of make_grid.
inline std::vector<double> make_symmetric_grid(const CavityConfig& cfg, double omega_max, int points_per_period) {
    const auto half = make_grid(cfg, omega_max, points_per_period).points;
    std::vector<double> g;
    g.reserve(2 * half.size() - 1);
    for (auto it = half.rbegin(); it != half.rend(); ++it)
        if (*it != 0.0) g.push_back(-*it);
    g.insert(g.end(), half.begin(), half.end());
    return g;
}

/// Per-mirror spectra for the requested orders; absent orders stay empty.
struct ForceBreakdown {
    std::optional<ForceSpectrum> left1, right1, left2, right2;
    double cutoff = 0.0;

    ForceSpectrum total(int order) const {
        const auto& l = order == 1 ? left1 : left2;
        const auto& r = order == 1 ? right1 : right2;
        if (!l || !r) throw std::invalid_argument("ForceBreakdown::total: order was not computed");
        ForceSpectrum t{ForceTarget::total, order, l->omega, l->values, cutoff};
        for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] += r->values[i];
        return t;
    }

    /// Zeroth order vanishes identically.
    static ForceSpectrum order0(const std::vector<double>& grid, double cutoff) {
        return {ForceTarget::total, 0, grid, std::vector<cplx>(grid.size()), cutoff};
    }
};

/// Evaluates both mirrors on the non-negative half of a symmetric grid and
/// fills w < 0 by F[-w] = conj(F[w]), the reality condition of F(t).
inline ForceBreakdown total_force_spectrum(const CavityConfig& cfg, const ModulationProfile& p,
                                           const std::vector<double>& grid, bool first_order, bool second_order,
                                           const QuadratureSpec& spec = {}, unsigned threads = 1) {
    const std::size_t n = grid.size();
    if (n == 0) throw std::invalid_argument("total_force_spectrum: empty grid");
    const double scale = std::max(std::abs(grid.front()), std::abs(grid.back()));
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("total_force_spectrum: grid must increase");
        if (std::abs(grid[i] + grid[n - 1 - i]) > 1e-12 * scale)
            throw std::invalid_argument("total_force_spectrum: grid must be symmetric about zero");
    }
    const std::size_t first_nonneg = n / 2;  // symmetric grids place zero (if present) at the centre

    ForceBreakdown out;
    out.cutoff = cfg.cutoff();
    auto make = [&](ForceTarget t, int order) { return ForceSpectrum{t, order, grid, std::vector<cplx>(n), cfg.cutoff()}; };
    if (first_order) {
        out.left1 = make(ForceTarget::left, 1);
        out.right1 = make(ForceTarget::right, 1);
    }
    if (second_order) {
        out.left2 = make(ForceTarget::left, 2);
        out.right2 = make(ForceTarget::right, 2);
    }
    const std::size_t m = n - first_nonneg;
    parallel_for(m, threads, [&](std::size_t k) {
        const std::size_t i = first_nonneg + k;
        const double w = grid[i];
        if (first_order) {
            out.left1->values[i] = force1(cfg, p, Mirror::left, w, spec);
            out.right1->values[i] = force1(cfg, p, Mirror::right, w, spec);
        }
        if (second_order) {
            out.left2->values[i] = force2(cfg, p, Mirror::left, w, spec).value;
            out.right2->values[i] = force2(cfg, p, Mirror::right, w, spec).value;
        }
    });
    for (auto* s : {&out.left1, &out.right1, &out.left2, &out.right2}) {
        if (!*s) continue;
        auto& v = (*s)->values;
        for (std::size_t i = 0; i < first_nonneg; ++i) v[i] = std::conj(v[n - 1 - i]);
    }
    return out;
}

struct TimeSignal {
    std::vector<double> times;
    std::vector<double> values;
    double max_imag_ratio = 0.0;  ///< largest |Im F(t)| / max |Re F(t)| before discarding
    bool alias_risk = false;      ///< grid spacing exceeded pi / (4 max|t|)
};

/// F(t) = (1/2pi) int dw F[w] e^{-iwt}, trapezoid over the sampled band.
inline TimeSignal time_domain(const ForceSpectrum& fs, const std::vector<double>& times) {
    TimeSignal out;
    out.times = times;
    out.values.resize(times.size());
    const auto& w = fs.omega;
    if (w.size() < 2) throw std::invalid_argument("time_domain: need at least two frequency samples");
    double max_step = 0.0;
    for (std::size_t j = 1; j < w.size(); ++j) max_step = std::max(max_step, w[j] - w[j - 1]);
    double tmax = 0.0;
    for (double t : times) tmax = std::max(tmax, std::abs(t));
    out.alias_risk = tmax > 0.0 && max_step > pi / (4.0 * tmax);

    double max_re = 0.0;
    double max_im = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        cplx acc{};
        for (std::size_t j = 0; j < w.size(); ++j) {
            double weight = 0.0;
            if (j > 0) weight += 0.5 * (w[j] - w[j - 1]);
            if (j + 1 < w.size()) weight += 0.5 * (w[j + 1] - w[j]);
            acc += weight * fs.values[j] * expi(-w[j] * times[k]);
        }
        acc /= 2.0 * pi;
        out.values[k] = acc.real();
        max_re = std::max(max_re, std::abs(acc.real()));
        max_im = std::max(max_im, std::abs(acc.imag()));
    }
    out.max_imag_ratio = max_re > 0.0 ? max_im / max_re : (max_im > 0.0 ? INFINITY : 0.0);
    return out;
}

struct Impulse {
    double value = 0.0;      ///< Re F[0] = int F(t) dt
    double imaginary = 0.0;  ///< Im F[0]; zero for a real force
    bool real_within_tolerance() const {
        return std::abs(imaginary) <= 1e-9 * std::abs(value) || imaginary == 0.0;
    }
};

/// The impulse int F(t) dt equals F[0] under the transform convention.
inline Impulse impulse(const ForceSpectrum& fs) {
    for (std::size_t i = 0; i < fs.omega.size(); ++i)
        if (fs.omega[i] == 0.0) return {fs.values[i].real(), fs.values[i].imag()};
    throw std::invalid_argument("impulse: omega = 0 is not on the grid");
}

}  // namespace casimir
