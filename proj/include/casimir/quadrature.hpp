#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature with global bisection of the
// panel carrying the largest error estimate. Error scaling and the roundoff
// floor follow the QUADPACK qk15 heuristics. Panels are processed in a fixed
// order and the final sum is taken left to right, so results are
// bit-reproducible for identical inputs.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "casimir/core.hpp"

namespace casimir {

/// How the relative tolerance is measured.
enum class ToleranceReference {
    value,      ///< rel_tol * |integral|
    magnitude,  ///< rel_tol * integral of |f|; for heavily cancelling integrands
};

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    std::optional<double> oscillation_period_hint{};
    ToleranceReference reference = ToleranceReference::value;

    void validate() const {
        if (!(rel_tol >= 1e-14) || !std::isfinite(rel_tol))
            throw ConfigError("quadrature.rel_tol: must be >= 1e-14");
        if (!(abs_tol > 0.0) || !std::isfinite(abs_tol))
            throw ConfigError("quadrature.abs_tol: must be positive");
        if (max_subdivisions < 1)
            throw ConfigError("quadrature.max_subdivisions: must be >= 1");
        if (oscillation_period_hint && !(*oscillation_period_hint > 0.0))
            throw ConfigError("quadrature: oscillation period hint must be positive");
    }

    QuadratureSpec with_hint(double period) const {
        QuadratureSpec s = *this;
        s.oscillation_period_hint = period;
        return s;
    }
    QuadratureSpec with_reference(ToleranceReference r) const {
        QuadratureSpec s = *this;
        s.reference = r;
        return s;
    }
    QuadratureSpec tightened(double factor) const {
        QuadratureSpec s = *this;
        s.rel_tol = std::max(1e-14, rel_tol / factor);
        s.abs_tol = abs_tol / factor;
        return s;
    }
};

/// Default spec for cavity integrands: panels resolve the pi/L period.
inline QuadratureSpec cavity_spec(const CavityConfig& cfg, QuadratureSpec base = {}) {
    return base.with_hint(cfg.resonance_spacing());
}

template <class T>
struct IntegralResult {
    T value{};
    double error_estimate = 0.0;
    int subdivisions_used = 0;
    /// Integral of |f|, used for magnitude-referenced tolerances.
    double magnitude = 0.0;
    /// Physical upper cutoff, set by integrate_semi_infinite.
    std::optional<double> cutoff{};
};

/// Thrown when the subdivision budget runs out (or roundoff stalls progress)
/// before the tolerance is met. Carries the best available estimate so the
/// caller can decide whether to accept it.
class ToleranceNotReached : public std::runtime_error {
public:
    ToleranceNotReached(const std::string& what, std::complex<double> best, double estimate, int subdivisions)
        : std::runtime_error(what), best_value(best), error_estimate(estimate), subdivisions_used(subdivisions) {}

    std::complex<double> best_value;
    double error_estimate;
    int subdivisions_used;
};

namespace detail {

inline double magnitude_of(double v) { return std::abs(v); }
inline double magnitude_of(const std::complex<double>& v) { return std::abs(v); }

inline std::complex<double> as_complex(double v) { return {v, 0.0}; }
inline std::complex<double> as_complex(const std::complex<double>& v) { return v; }

// Kronrod abscissae (descending, last is the centre) and weights; Gauss
// 7-point weights belong to the odd-indexed abscissae.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Panel {
    double a;
    double b;
    T value;
    double error;
    double magnitude;
    bool roundoff_limited;
};

template <class T, class F>
Panel<T> gauss_kronrod_15(F& f, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);

    std::array<T, 7> f1{};
    std::array<T, 7> f2{};
    const T fc = f(centr);
    T resg = fc * kWg[3];
    T resk = fc * kWgk[7];
    double resabs = magnitude_of(resk);
    for (int j = 0; j < 3; ++j) {
        const int jtw = 2 * j + 1;
        const double dx = hlgth * kXgk[jtw];
        const T v1 = f(centr - dx);
        const T v2 = f(centr + dx);
        f1[jtw] = v1;
        f2[jtw] = v2;
        resg += kWg[j] * (v1 + v2);
        resk += kWgk[jtw] * (v1 + v2);
        resabs += kWgk[jtw] * (magnitude_of(v1) + magnitude_of(v2));
    }
    for (int j = 0; j < 4; ++j) {
        const int jtwm1 = 2 * j;
        const double dx = hlgth * kXgk[jtwm1];
        const T v1 = f(centr - dx);
        const T v2 = f(centr + dx);
        f1[jtwm1] = v1;
        f2[jtwm1] = v2;
        resk += kWgk[jtwm1] * (v1 + v2);
        resabs += kWgk[jtwm1] * (magnitude_of(v1) + magnitude_of(v2));
    }
    const T reskh = resk * 0.5;
    double resasc = kWgk[7] * magnitude_of(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (magnitude_of(f1[j] - reskh) + magnitude_of(f2[j] - reskh));

    const double dh = std::abs(hlgth);
    resasc *= dh;
    resabs *= dh;
    double err = magnitude_of((resk - resg) * hlgth);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    bool floor_hit = false;
    if (resabs > tiny / (50.0 * eps)) {
        const double floor = 50.0 * eps * resabs;
        if (err <= floor) {
            err = floor;
            floor_hit = true;
        }
    }
    return {a, b, resk * hlgth, err, resabs, floor_hit};
}

template <class T>
struct ByError {
    bool operator()(const Panel<T>& x, const Panel<T>& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;
    }
};

inline std::vector<double> initial_edges(double a, double b, const QuadratureSpec& spec,
                                         std::span<const double> breakpoints) {
    std::vector<double> edges{a};
    for (double p : breakpoints)
        if (std::isfinite(p) && p > a && p < b) edges.push_back(p);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    if (!spec.oscillation_period_hint) return edges;
    const double width = *spec.oscillation_period_hint / 4.0;
    std::vector<double> out{edges.front()};
    for (std::size_t i = 1; i < edges.size(); ++i) {
        const double lo = edges[i - 1];
        const double hi = edges[i];
        const auto n = static_cast<long>(std::ceil((hi - lo) / width - 1e-9));
        for (long k = 1; k < n; ++k)
            out.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n));
        out.push_back(hi);
    }
    return out;
}

}  // namespace detail

/// Adaptive integral of f over [a, b]. Optional breakpoints (peaks, kinks)
/// become initial panel edges. Throws ToleranceNotReached when the budget
/// of max_subdivisions panels is exhausted.
template <class F>
auto integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec, std::span<const double> breakpoints = {})
    -> IntegralResult<std::decay_t<std::invoke_result_t<F&, double>>> {
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    static_assert(std::is_same_v<T, double> || std::is_same_v<T, std::complex<double>>,
                  "integrand must return double or std::complex<double>");
    spec.validate();
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw std::invalid_argument("integrate_1d: need finite a < b");

    const auto edges = detail::initial_edges(a, b, spec, breakpoints);
    std::priority_queue<detail::Panel<T>, std::vector<detail::Panel<T>>, detail::ByError<T>> heap;
    T total{};
    double total_err = 0.0;
    double total_mag = 0.0;
    for (std::size_t i = 1; i < edges.size(); ++i) {
        auto p = detail::gauss_kronrod_15<T>(f, edges[i - 1], edges[i]);
        total += p.value;
        total_err += p.error;
        total_mag += p.magnitude;
        heap.push(p);
    }

    auto tolerance = [&] {
        const double ref = spec.reference == ToleranceReference::value ? detail::magnitude_of(total) : total_mag;
        return std::max(spec.abs_tol, spec.rel_tol * ref);
    };

    auto finish = [&] {
        std::vector<detail::Panel<T>> panels;
        panels.reserve(heap.size());
        while (!heap.empty()) {
            panels.push_back(heap.top());
            heap.pop();
        }
        std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
        IntegralResult<T> r;
        for (const auto& p : panels) {
            r.value += p.value;
            r.error_estimate += p.error;
            r.magnitude += p.magnitude;
        }
        r.subdivisions_used = static_cast<int>(panels.size());
        return r;
    };

    while (total_err > tolerance()) {
        const auto worst = heap.top();
        const bool budget_spent = static_cast<int>(heap.size()) >= spec.max_subdivisions;
        const double mid = 0.5 * (worst.a + worst.b);
        const bool unsplittable = !(mid > worst.a && mid < worst.b);
        if (budget_spent || worst.roundoff_limited || unsplittable) {
            auto r = finish();
            const char* why = budget_spent ? "subdivision budget exhausted"
                                           : (worst.roundoff_limited ? "roundoff limits further refinement"
                                                                     : "panel cannot be bisected");
            throw ToleranceNotReached(std::string("integrate_1d: ") + why, detail::as_complex(r.value),
                                      r.error_estimate, r.subdivisions_used);
        }
        heap.pop();
        auto left = detail::gauss_kronrod_15<T>(f, worst.a, mid);
        auto right = detail::gauss_kronrod_15<T>(f, mid, worst.b);
        total += (left.value + right.value) - worst.value;
        total_err += (left.error + right.error) - worst.error;
        total_mag += (left.magnitude + right.magnitude) - worst.magnitude;
        heap.push(left);
        heap.push(right);
    }
    return finish();
}

/// Integral over [a, cutoff]. The cutoff is a physical parameter (mirror
/// plasma frequency), not a numerical truncation, and is reported back.
template <class F>
auto integrate_semi_infinite(F&& f, double a, double cutoff, const QuadratureSpec& spec,
                             std::span<const double> breakpoints = {}) {
    if (!(cutoff > 0.0) || !(a < cutoff))
        throw std::invalid_argument("integrate_semi_infinite: need a < cutoff and cutoff > 0");
    auto r = integrate_1d(std::forward<F>(f), a, cutoff, spec, breakpoints);
    r.cutoff = cutoff;
    return r;
}

struct Range {
    double lo;
    double hi;
};

/// Nested adaptive integral over a rectangle: outer variable x, inner y.
/// Inner integrals run at a tenth of the outer tolerance; the reported error
/// adds the outer estimate and (outer length) * (largest inner error).
/// inner_breaks(x) may supply x-dependent inner breakpoints.
template <class F, class B = std::nullptr_t>
auto integrate_2d(F&& f, Range outer, Range inner, const QuadratureSpec& spec,
                  std::span<const double> outer_breaks = {}, B inner_breaks = nullptr)
    -> IntegralResult<std::decay_t<std::invoke_result_t<F&, double, double>>> {
    using T = std::decay_t<std::invoke_result_t<F&, double, double>>;
    const QuadratureSpec inner_spec = spec.tightened(10.0);
    double worst_inner = 0.0;
    auto outer_integrand = [&](double x) -> T {
        auto g = [&](double y) -> T { return f(x, y); };
        IntegralResult<T> r;
        if constexpr (std::is_same_v<B, std::nullptr_t>) {
            r = integrate_1d(g, inner.lo, inner.hi, inner_spec);
        } else {
            const std::vector<double> br = inner_breaks(x);
            r = integrate_1d(g, inner.lo, inner.hi, inner_spec, br);
        }
        worst_inner = std::max(worst_inner, r.error_estimate);
        return r.value;
    };
    auto r = integrate_1d(outer_integrand, outer.lo, outer.hi, spec, outer_breaks);
    r.error_estimate += (outer.hi - outer.lo) * worst_inner;
    return r;
}

/// 4 sin^2(x) / x with a Taylor fallback below |x| = 1e-4, so the removable
/// zero at the origin is exact.
inline double guarded_sinc_sq(double x) {
    if (std::abs(x) < 1e-4) return 4.0 * x * (1.0 - x * x / 3.0);
    const double s = std::sin(x);
    return 4.0 * s * s / x;
}

/// sin(z)/z with sinc(0) = 1.
inline double sinc(double z) {
    if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0;
    return std::sin(z) / z;
}

/// (exp(i*a*x) - 1) / x, evaluated as i*a*exp(i*a*x/2)*sinc(a*x/2) so it stays
/// accurate (and finite) as x -> 0.
inline std::complex<double> expm1i_over(double x, double a) {
    const double half = 0.5 * a * x;
    return std::complex<double>(0.0, a) * std::polar(1.0, half) * sinc(half);
}

/// exp(i*theta)
inline std::complex<double> expi(double theta) { return std::polar(1.0, theta); }

}  // namespace casimir
