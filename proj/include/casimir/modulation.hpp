#pragma once

// Time profiles f(t) of the right-mirror coupling, lambda(t) = lambda0 * f(t),
// with |f| <= 1. Fourier convention: f[w] = int dt f(t) exp(+i w t), so that
// f(t) = int dw/2pi f[w] exp(-i w t). Every module uses this single convention.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "casimir/core.hpp"

namespace casimir {

/// exp(-|t|/T) cos(Omega t)
struct DampedCosine {
    double drive_frequency;
    double decay_time;
};

/// exp(-t^2 / (2 sigma_t^2)) cos(Omega t)
struct GaussianPulse {
    double center_frequency;
    double sigma_t;
};

/// Uniform samples f(t0 + k dt), k = 0..n-1; zero outside the sampled window.
struct SampledWindow {
    double t0;
    double dt;
    std::vector<double> samples;

    double t_end() const { return t0 + dt * static_cast<double>(samples.size() - 1); }
};

class ModulationProfile {
public:
    using Variant = std::variant<DampedCosine, GaussianPulse, SampledWindow>;

    ModulationProfile(DampedCosine d) : v_(d) {
        if (!(d.drive_frequency >= 0.0) || !std::isfinite(d.drive_frequency))
            throw ConfigError("modulation.omega: must be non-negative and finite");
        if (!(d.decay_time > 0.0) || !std::isfinite(d.decay_time))
            throw ConfigError("modulation.T: must be positive and finite");
    }
    ModulationProfile(GaussianPulse g) : v_(g) {
        if (!(g.center_frequency >= 0.0) || !std::isfinite(g.center_frequency))
            throw ConfigError("modulation.omega: must be non-negative and finite");
        if (!(g.sigma_t > 0.0) || !std::isfinite(g.sigma_t))
            throw ConfigError("modulation.sigma_t: must be positive and finite");
    }
    ModulationProfile(SampledWindow s) : v_(std::move(s)) {
        const auto& w = std::get<SampledWindow>(v_);
        if (w.samples.size() < 2) throw ConfigError("modulation.samples: need at least two samples");
        if (!(w.dt > 0.0) || !std::isfinite(w.dt) || !std::isfinite(w.t0))
            throw ConfigError("modulation.samples: time step must be positive and finite");
        for (double x : w.samples) {
            if (!std::isfinite(x) || std::abs(x) > 1.0 + 1e-12)
                throw ConfigError("modulation.samples: |f(t)| must not exceed 1");
        }
    }

    const Variant& variant() const { return v_; }

    /// f(t)
    double eval_time(double t) const {
        return std::visit(
            [t](const auto& p) -> double {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, DampedCosine>) {
                    return std::exp(-std::abs(t) / p.decay_time) * std::cos(p.drive_frequency * t);
                } else if constexpr (std::is_same_v<P, GaussianPulse>) {
                    return std::exp(-t * t / (2.0 * p.sigma_t * p.sigma_t)) * std::cos(p.center_frequency * t);
                } else {
                    if (t < p.t0 || t > p.t_end()) return 0.0;
                    const double x = (t - p.t0) / p.dt;
                    const auto k = std::min(static_cast<std::size_t>(x), p.samples.size() - 2);
                    const double frac = x - static_cast<double>(k);
                    return (1.0 - frac) * p.samples[k] + frac * p.samples[k + 1];
                }
            },
            v_);
    }

    /// f[omega] under the exp(+i omega t) forward convention.
    cplx fourier(double omega) const {
        return std::visit(
            [omega](const auto& p) -> cplx {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, DampedCosine>) {
                    const double T = p.decay_time;
                    const double dm = T * (omega - p.drive_frequency);
                    const double dp = T * (omega + p.drive_frequency);
                    return {T / (1.0 + dm * dm) + T / (1.0 + dp * dp), 0.0};
                } else if constexpr (std::is_same_v<P, GaussianPulse>) {
                    const double s = p.sigma_t;
                    const double dm = s * (omega - p.center_frequency);
                    const double dp = s * (omega + p.center_frequency);
                    const double norm = s * std::sqrt(2.0 * pi) / 2.0;
                    return {norm * (std::exp(-0.5 * dm * dm) + std::exp(-0.5 * dp * dp)), 0.0};
                } else {
                    // trapezoid in t
                    cplx acc{};
                    const std::size_t n = p.samples.size();
                    for (std::size_t k = 0; k < n; ++k) {
                        const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
                        const double t = p.t0 + p.dt * static_cast<double>(k);
                        acc += w * p.samples[k] * std::polar(1.0, omega * t);
                    }
                    return acc * p.dt;
                }
            },
            v_);
    }

    /// |f[omega]|^2
    double power(double omega) const { return std::norm(fourier(omega)); }

    /// Frequencies where f[omega] peaks (the drive lines at +-Omega); empty
    /// for sampled windows.
    std::vector<double> peak_centers() const {
        if (const auto* d = std::get_if<DampedCosine>(&v_)) return {d->drive_frequency, -d->drive_frequency};
        if (const auto* g = std::get_if<GaussianPulse>(&v_)) return {g->center_frequency, -g->center_frequency};
        return {};
    }

    /// Spectral line width (1/T, 1/sigma_t, or 1/window length).
    double line_width() const {
        return std::visit(
            [](const auto& p) -> double {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, DampedCosine>) return 1.0 / p.decay_time;
                else if constexpr (std::is_same_v<P, GaussianPulse>) return 1.0 / p.sigma_t;
                else return 1.0 / (p.t_end() - p.t0);
            },
            v_);
    }

    /// Breakpoints that resolve each spectral line centred at shift + peak.
    std::vector<double> line_breakpoints(double shift) const {
        std::vector<double> out;
        const double w = line_width();
        for (double c : peak_centers()) {
            for (double k : {0.0, 1.0, 5.0, 25.0}) {
                out.push_back(shift + c + k * w);
                if (k != 0.0) out.push_back(shift + c - k * w);
            }
        }
        return out;
    }

    /// Omega*T for the damped drive; the monochromatic idealisation needs it large.
    std::optional<double> drive_periods() const {
        if (const auto* d = std::get_if<DampedCosine>(&v_)) return d->drive_frequency * d->decay_time;
        if (const auto* g = std::get_if<GaussianPulse>(&v_)) return g->center_frequency * g->sigma_t;
        return std::nullopt;
    }

private:
    Variant v_;
};

}  // namespace casimir
