#pragma once

// Shared domain types for the asymmetric cavity model. Natural units
// (hbar = c = 1): lengths are inverse frequencies and every coupling,
// frequency and cutoff shares one unit.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace casimir {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Raised for invalid user-facing configuration (bad keys, out-of-range values).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Perfectly reflecting left mirror (g -> infinity).
struct DirichletLimit {};

/// Delta mirror of finite coupling strength g.
struct FiniteG {
    double g = 0.0;
};

using LeftCoupling = std::variant<DirichletLimit, FiniteG>;

inline bool is_dirichlet(const LeftCoupling& c) { return std::holds_alternative<DirichletLimit>(c); }

/// Cavity geometry and couplings. Validated on construction and immutable
/// afterwards; use the with_* helpers to derive modified copies.
class CavityConfig {
public:
    /// Default cutoff: 50 cavity resonances, 50*pi/L.
    static double default_cutoff(double length) { return 50.0 * pi / length; }

    CavityConfig(double length, double lambda0, double cutoff, LeftCoupling left = DirichletLimit{})
        : length_(length), lambda0_(lambda0), cutoff_(cutoff), left_(left) {
        if (!std::isfinite(length) || length <= 0.0)
            throw ConfigError("length: must be positive and finite");
        if (!std::isfinite(lambda0) || lambda0 < 0.0)
            throw ConfigError("lambda0: must be non-negative and finite");
        if (!std::isfinite(cutoff) || cutoff <= 0.0)
            throw ConfigError("cutoff: must be positive and finite");
        // at least ten cavity resonances below the cutoff
        const double min_cutoff = 10.0 * pi / length;
        if (cutoff < min_cutoff * (1.0 - 1e-12))
            throw ConfigError("cutoff: must be >= 10*pi/length (" + std::to_string(min_cutoff) + ")");
        if (const auto* fg = std::get_if<FiniteG>(&left_)) {
            if (!std::isfinite(fg->g) || fg->g <= 0.0)
                throw ConfigError("left_coupling.g: must be positive and finite");
        }
    }

    CavityConfig(double length, double lambda0) : CavityConfig(length, lambda0, default_cutoff(length)) {}

    double length() const { return length_; }
    double lambda0() const { return lambda0_; }
    double cutoff() const { return cutoff_; }
    const LeftCoupling& left_coupling() const { return left_; }
    bool dirichlet() const { return is_dirichlet(left_); }

    /// Cavity resonance spacing pi/L.
    double resonance_spacing() const { return pi / length_; }

    CavityConfig with_lambda0(double v) const { return {length_, v, cutoff_, left_}; }
    CavityConfig with_cutoff(double v) const { return {length_, lambda0_, v, left_}; }
    CavityConfig with_length(double v) const { return {v, lambda0_, cutoff_, left_}; }

    /// Perturbative validity is only qualitative; flag lambda0*L above 0.1.
    bool lambda0_is_large() const { return lambda0_ * length_ > 0.1; }

private:
    double length_;
    double lambda0_;
    double cutoff_;
    LeftCoupling left_;
};

/// Strictly increasing non-negative sample points.
struct FrequencyGrid {
    std::vector<double> points;
    int points_per_period = 8;

    std::size_t size() const { return points.size(); }
    double max_spacing() const {
        double s = 0.0;
        for (std::size_t i = 1; i < points.size(); ++i)
            s = std::max(s, points[i] - points[i - 1]);
        return s;
    }
};

/// Uniform grid on [0, omega_max] with spacing at most (pi/L)/points_per_period.
/// The spacing divides omega_max exactly, so multiples of pi/L are hit when
/// omega_max is itself such a multiple.
inline FrequencyGrid make_grid(const CavityConfig& cfg, double omega_max, int points_per_period) {
    if (!std::isfinite(omega_max) || omega_max <= 0.0)
        throw std::invalid_argument("make_grid: omega_max must be positive and finite");
    if (points_per_period < 8)
        throw std::invalid_argument("make_grid: points_per_period must be >= 8");
    const double max_step = cfg.resonance_spacing() / points_per_period;
    const auto intervals = static_cast<std::size_t>(std::ceil(omega_max / max_step - 1e-9));
    const double h = omega_max / static_cast<double>(intervals);
    FrequencyGrid g;
    g.points_per_period = points_per_period;
    g.points.reserve(intervals + 1);
    for (std::size_t i = 0; i < intervals; ++i)
        g.points.push_back(static_cast<double>(i) * h);
    g.points.push_back(omega_max);
    return g;
}

/// Right-moving (phi) and left-moving (psi) amplitudes of the field at one frequency.
struct ComplexAmplitudePair {
    cplx right_moving{};
    cplx left_moving{};

    bool finite() const {
        return std::isfinite(right_moving.real()) && std::isfinite(right_moving.imag()) &&
               std::isfinite(left_moving.real()) && std::isfinite(left_moving.imag());
    }
};

}  // namespace casimir
