#include "casimir/modulation.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace casimir;
using Catch::Approx;

namespace {

// brute force f[w] = int f(t) e^{iwt} dt by midpoint sums
cplx brute_transform(const ModulationProfile& p, double w, double t0, double t1, long n) {
    const double h = (t1 - t0) / n;
    cplx s{};
    for (long k = 0; k < n; ++k) {
        const double t = t0 + (k + 0.5) * h;
        s += p.eval_time(t) * std::polar(1.0, w * t);
    }
    return s * h;
}

}  // namespace

TEST_CASE("damped cosine transform", "[modulation]") {
    ModulationProfile p(DampedCosine{3.0, 200.0});
    const double peak = p.fourier(3.0).real();
    CHECK(peak == Approx(200.0 + 200.0 / (1 + 1200.0 * 1200.0)).epsilon(1e-14));
    CHECK(peak == Approx(200.0).epsilon(1e-6));
    CHECK(p.fourier(3.0).imag() == 0.0);
    // real and even
    for (double w : {0.1, 1.0, 2.9, 3.05, 7.0}) CHECK(p.fourier(w).real() == p.fourier(-w).real());
    CHECK(p.eval_time(0.0) == 1.0);
    CHECK(std::abs(p.eval_time(1.234)) <= 1.0);
}

TEST_CASE("damped cosine transform matches time-domain integral", "[modulation]") {
    ModulationProfile p(DampedCosine{3.0, 2.0});
    for (double w : {0.0, 1.0, 2.5, 3.0, 4.0}) {
        const cplx b = brute_transform(p, w, -60.0, 60.0, 400000);
        CHECK(std::abs(b - p.fourier(w)) < 1e-6 * std::abs(p.fourier(3.0)));
    }
}

TEST_CASE("gaussian transform", "[modulation]") {
    ModulationProfile p(GaussianPulse{3.0, 5.0});
    CHECK(p.fourier(3.0).real() == Approx(5.0 * std::sqrt(2 * pi) / 2).epsilon(1e-12));
    for (double w : {0.0, 2.7, 3.0, 3.4}) {
        const cplx b = brute_transform(p, w, -60.0, 60.0, 200000);
        CHECK(std::abs(b - p.fourier(w)) < 1e-8);
    }
}

TEST_CASE("sampled window", "[modulation]") {
    std::vector<double> s;
    const double dt = 0.01;
    for (int k = 0; k <= 2000; ++k) s.push_back(std::cos(3.0 * (k * dt - 10.0)) * std::exp(-std::abs(k * dt - 10.0)));
    ModulationProfile p(SampledWindow{-10.0, dt, s});
    CHECK(p.eval_time(-11.0) == 0.0);
    CHECK(p.eval_time(10.5) == 0.0);
    CHECK(p.eval_time(0.0) == Approx(1.0));
    CHECK(p.eval_time(0.005) == Approx(0.5 * (s[1000] + s[1001])));
    // trapezoid transform close to the analytic damped cosine with T = 1
    ModulationProfile exact(DampedCosine{3.0, 1.0});
    CHECK(std::abs(p.fourier(3.0) - exact.fourier(3.0)) < 1e-3);
    CHECK(p.peak_centers().empty());
    CHECK(p.line_width() == Approx(1.0 / 20.0));
}

TEST_CASE("profile validation", "[modulation]") {
    CHECK_THROWS_AS(ModulationProfile(DampedCosine{3.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(ModulationProfile(DampedCosine{-1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(ModulationProfile(GaussianPulse{3.0, -1.0}), ConfigError);
    CHECK_THROWS_AS(ModulationProfile(SampledWindow{0.0, 0.1, {0.5}}), ConfigError);
    CHECK_THROWS_AS(ModulationProfile(SampledWindow{0.0, 0.1, {0.5, 1.5}}), ConfigError);
    CHECK_THROWS_AS(ModulationProfile(SampledWindow{0.0, 0.0, {0.5, 0.5}}), ConfigError);
}

TEST_CASE("line breakpoints", "[modulation]") {
    ModulationProfile p(DampedCosine{3.0, 10.0});
    auto b = p.line_breakpoints(1.0);
    CHECK(b.size() == 14);
    CHECK(std::find(b.begin(), b.end(), 4.0) != b.end());
    CHECK(std::find(b.begin(), b.end(), -2.0) != b.end());
    CHECK(p.drive_periods().value() == Approx(30.0));
}
