#pragma once

// Local delta-mirror scattering and the global perturbative kernels of the
// cavity with a perfectly reflecting left mirror. Only the upper-right
// (right-moving output from left-moving input) entries of the order-1 and
// order-2 kernels are non-zero: all radiation leaves through the right mirror.

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

#include "casimir/core.hpp"
#include "casimir/modulation.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

using Matrix2c = Eigen::Matrix2cd;

/// Transparency/reflectivity pair of a delta mirror at one frequency.
struct MirrorScattering {
    cplx s_plus, s_minus, r_plus, r_minus;

    Matrix2c matrix() const {
        Matrix2c m;
        m << s_plus, r_plus, r_minus, s_minus;
        return m;
    }
};

/// s = w/(w - i g), r = i g/(w - i g). An empty g means the Dirichlet limit
/// (s = 0, r = -1); g = 0 is a fully transparent mirror.
inline MirrorScattering local_mirror(std::optional<double> g, double omega) {
    if (!g) return {0.0, 0.0, -1.0, -1.0};
    if (!(*g >= 0.0)) throw std::invalid_argument("local_mirror: g must be non-negative");
    if (*g == 0.0) return {1.0, 1.0, 0.0, 0.0};
    if (omega == 0.0) throw std::invalid_argument("local_mirror: omega = 0 is degenerate for finite g");
    const cplx den{omega, -*g};
    const cplx s = omega / den;
    const cplx r = cplx{0.0, *g} / den;
    return {s, s, r, r};
}

inline Matrix2c local_mirror_matrix(std::optional<double> g, double omega) { return local_mirror(g, omega).matrix(); }

/// Order-0 cavity matrix [[0, -e^{2iwL}], [-e^{-2iwL}, 0]].
inline Matrix2c dirichlet_kernel0(const CavityConfig& cfg, double omega) {
    if (!cfg.dirichlet()) throw std::invalid_argument("dirichlet_kernel0: left mirror is not in the Dirichlet limit");
    const double ph = 2.0 * omega * cfg.length();
    Matrix2c m = Matrix2c::Zero();
    m(0, 1) = -expi(ph);
    m(1, 0) = -expi(-ph);
    return m;
}

/// Upper-right entry of the order-1 kernel,
///   -(i lambda0 (1 - e^{2iwL}) / 2w) f[w - w'] (1 - e^{-2iw'L}).
/// The quotient (1 - e^{2iwL})/w is evaluated in its bounded form, so w = 0
/// gives the continuous limit.
inline cplx kernel1(const CavityConfig& cfg, const ModulationProfile& p, double omega, double omega_p) {
    const double L = cfg.length();
    const cplx a = -expm1i_over(omega, 2.0 * L);   // (1 - e^{2iwL})/w
    const cplx b = -expi(-2.0 * omega_p * L) + 1.0;  // 1 - e^{-2iw'L}
    return cplx{0.0, -0.5 * cfg.lambda0()} * a * p.fourier(omega - omega_p) * b;
}

/// Upper-right entry of the order-2 kernel,
///   -(lambda0^2 (1 - e^{2iwL})(1 - e^{2iw'L}) / 4 w w') f[w - w'] f[w' - w''] (1 - e^{-2iw''L}).
inline cplx kernel2(const CavityConfig& cfg, const ModulationProfile& p, double omega, double omega_p,
                    double omega_pp) {
    const double L = cfg.length();
    const double lam = cfg.lambda0();
    const cplx a = expm1i_over(omega, 2.0 * L);    // (e^{2iwL} - 1)/w
    const cplx b = expm1i_over(omega_p, 2.0 * L);  // (e^{2iw'L} - 1)/w'
    const cplx c = -expi(-2.0 * omega_pp * L) + 1.0;
    return -0.25 * lam * lam * a * b * p.fourier(omega - omega_p) * p.fourier(omega_p - omega_pp) * c;
}

/// Callable view of the global kernels S0, S1, S2 as 2x2 blocks.
class ScatteringKernels {
public:
    ScatteringKernels(CavityConfig cfg, ModulationProfile profile) : cfg_(std::move(cfg)), profile_(std::move(profile)) {
        if (!cfg_.dirichlet())
            throw std::invalid_argument("ScatteringKernels: global kernels exist only in the Dirichlet limit");
    }

    const CavityConfig& config() const { return cfg_; }
    const ModulationProfile& profile() const { return profile_; }

    Matrix2c order0(double omega) const { return dirichlet_kernel0(cfg_, omega); }

    Matrix2c order1(double omega, double omega_p) const {
        Matrix2c m = Matrix2c::Zero();
        m(0, 1) = kernel1(cfg_, profile_, omega, omega_p);
        return m;
    }

    Matrix2c order2(double omega, double omega_p, double omega_pp) const {
        Matrix2c m = Matrix2c::Zero();
        m(0, 1) = kernel2(cfg_, profile_, omega, omega_p, omega_pp);
        return m;
    }

private:
    CavityConfig cfg_;
    ModulationProfile profile_;
};

/// Applies a 2x2 block to a (phi, psi) amplitude pair.
inline ComplexAmplitudePair apply(const Matrix2c& m, const ComplexAmplitudePair& in) {
    return {m(0, 0) * in.right_moving + m(0, 1) * in.left_moving,
            m(1, 0) * in.right_moving + m(1, 1) * in.left_moving};
}

}  // namespace casimir
