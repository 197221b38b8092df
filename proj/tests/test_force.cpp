#include "casimir/force.hpp"
#include "casimir/validation.hpp"

#include <catch_amalgamated.hpp>

using namespace casimir;
using Catch::Approx;

namespace {
const ModulationProfile drive50(DampedCosine{3.0, 50.0});
}

TEST_CASE("eta matrix and momentum flux", "[force]") {
    const Matrix2c e = eta_matrix();
    CHECK(e(0, 0) == cplx(1, 0));
    CHECK(e(1, 1) == cplx(-1, 0));
    CHECK(e(0, 1) == cplx(0, 0));
    CHECK(momentum_flux({cplx(1, 0), cplx(0, 0)}, 2.0) == 4.0);
    CHECK(momentum_flux({cplx(0, 0), cplx(0, 1)}, 2.0) == -4.0);
    // a perfect reflector reverses the flux of an incoming left-mover
    const CavityConfig c(1.0, 0.01);
    const ComplexAmplitudePair in{cplx(0, 0), cplx(0.3, 0.4)};
    CHECK(momentum_flux(casimir::apply(dirichlet_kernel0(c, 1.7), in), 1.7) == Approx(-momentum_flux(in, 1.7)));
}

TEST_CASE("first order: zero coupling and exact linearity", "[force]") {
    const CavityConfig c(1.0, 0.01, 10 * pi);
    for (Mirror m : {Mirror::left, Mirror::right}) {
        CHECK(force1(c.with_lambda0(0.0), drive50, m, 1.0) == cplx(0, 0));
        for (double w : {0.0, 1.3, 3.0}) CHECK(force1(c.with_lambda0(0.02), drive50, m, w) == 2.0 * force1(c, drive50, m, w));
    }
    CHECK_THROWS_AS(force1(c, drive50, Mirror::left, 10 * pi), std::invalid_argument);
    CHECK_THROWS_AS(force1(CavityConfig(1.0, 0.01, 10 * pi, FiniteG{1.0}), drive50, Mirror::left, 1.0), std::invalid_argument);
}

TEST_CASE("first order impulse cancels between the mirrors", "[force]") {
    for (double cut : {10.25 * pi, 17.3 * pi, 31.7 * pi}) {
        const CavityConfig c(1.0, 0.01, cut);
        const cplx l = force1(c, drive50, Mirror::left, 0.0);
        const cplx r = force1(c, drive50, Mirror::right, 0.0);
        INFO("cutoff " << cut << " left " << l << " right " << r);
        CHECK(std::abs(l) > 0.0);
        CHECK(std::abs(l + r) <= 1e-8 * std::max(std::abs(l), std::abs(r)));
        // closed form of the left-mirror value at w = 0
        const double exact = 0.01 * drive50.fourier(0.0).real() * (1 - std::cos(2 * cut)) / (4 * pi);
        CHECK(std::abs(l - exact) <= 1e-8 * std::abs(exact));
    }
    // at cutoffs that are multiples of pi/L each mirror's value is itself zero
    for (double cut : {10 * pi, 25 * pi, 50 * pi}) {
        const CavityConfig c(1.0, 0.01, cut);
        const double scale = 0.01 * drive50.fourier(0.0).real() * cut / (2 * pi);
        CHECK(std::abs(force1(c, drive50, Mirror::left, 0.0)) < 1e-12 * scale);
        CHECK(std::abs(force1(c, drive50, Mirror::right, 0.0)) < 1e-12 * scale);
    }
}

TEST_CASE("first order survives brackets that cancel identically", "[force]") {
    // at w = (k + 1/2) pi / L the left [0, cut] bracket is zero for every w'
    const CavityConfig c(1.0, 0.01, 10 * pi);
    QuadratureSpec q;
    q.rel_tol = 1e-8;
    q.abs_tol = 1e-14;
    for (int k = 0; k < 4; ++k) {
        const double w = (k + 0.5) * pi;
        CHECK_NOTHROW(force1(c, drive50, Mirror::left, w, q));
        CHECK_NOTHROW(force1(c, drive50, Mirror::right, w, q));
    }
}

TEST_CASE("first order matches Simpson oracle", "[force][oracle]") {
    const CavityConfig c(1.0, 0.01, 10 * pi);
    const ModulationProfile p(GaussianPulse{2.0, 4.0});
    for (Mirror m : {Mirror::left, Mirror::right}) {
        for (double w : {0.0, 0.7, 2.1, 5.0}) {
            const cplx main = force1(c, p, m, w);
            const cplx ref = oracle_force1(c, p, m, w, 1 << 14);
            const cplx half = oracle_force1(c, p, m, w, 1 << 13);
            const double scale = 0.01 * std::abs(p.fourier(w)) * c.cutoff() / (2 * pi);
            INFO(to_string(m) << " w=" << w << " main " << main << " oracle " << ref);
            CHECK(std::abs(ref - half) < 1e-10 * scale);
            CHECK(std::abs(main - ref) <= 1e-7 * std::abs(ref) + 1e-10 * scale);
        }
    }
}

TEST_CASE("second order: zero coupling and exact quadratic scaling", "[force]") {
    const CavityConfig c(1.0, 0.01, 10 * pi);
    const ModulationProfile p(DampedCosine{3.0, 5.0});
    CHECK(force2(c.with_lambda0(0.0), p, Mirror::right, 1.0).value == cplx(0, 0));
    const auto a = force2(c, p, Mirror::left, 0.8);
    const auto b = force2(c.with_lambda0(0.02), p, Mirror::left, 0.8);
    CHECK(b.value == 4.0 * a.value);
    for (int i = 0; i < 3; ++i) CHECK(b.terms[static_cast<std::size_t>(i)].value == 4.0 * a.terms[static_cast<std::size_t>(i)].value);
    // the w' range of the third left term is empty at w = 0
    CHECK(force2(c, p, Mirror::left, 0.0).terms[2].value == cplx(0, 0));
}

TEST_CASE("second order first term matches frozen high-precision value", "[force][oracle]") {
    const CavityConfig c(1.0, 1.0, 10 * pi);
    const auto r = force2(c, drive50, Mirror::left, 3.0);
    const cplx exact(18.368611481406878722, -2.6183820677490394855);
    CHECK(std::abs(r.terms[0].value - exact) < 1e-7 * std::abs(exact));
}

TEST_CASE("second order terms match midpoint oracle", "[force][oracle]") {
    const CavityConfig c(1.0, 1.0, 10 * pi);
    const ModulationProfile p(DampedCosine{3.0, 5.0});
    const double w = 1.0;
    for (Mirror m : {Mirror::left, Mirror::right}) {
        const auto main = force2(c, p, m, w);
        double scale = 0.0;
        for (const auto& t : main.terms) scale = std::max(scale, std::abs(t.value));
        for (int term = 0; term < 3; ++term) {
            const auto o = oracle_force2_term(c, p, m, term, w, 1200, 1200);
            const cplx got = main.terms[static_cast<std::size_t>(term)].value;
            INFO(to_string(m) << " term " << term << " main " << got << " oracle " << o.value << " h->2h change " << o.change());
            CHECK(std::abs(got - o.value) <= 1e-4 * scale);
        }
    }
}

TEST_CASE("total force spectrum symmetry", "[force]") {
    const CavityConfig c(1.0, 0.01, 10 * pi);
    const auto grid = make_symmetric_grid(c, 2 * pi, 8);
    REQUIRE(grid.size() == 33);
    CHECK(grid[16] == 0.0);
    const auto fb = total_force_spectrum(c, drive50, grid, true, false, {}, 2);
    REQUIRE(fb.left1);
    CHECK_FALSE(fb.left2);
    CHECK(fb.cutoff == 10 * pi);
    const auto tot = fb.total(1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(tot.values[i] == std::conj(tot.values[grid.size() - 1 - i]));
        // order-1 values carry the factor f[w]
        const cplx direct = force1(c, drive50, Mirror::left, std::abs(grid[i]));
        CHECK((fb.left1->values[i] == direct || fb.left1->values[i] == std::conj(direct)));
    }
    CHECK_THROWS_AS(fb.total(2), std::invalid_argument);
    const auto zero = ForceBreakdown::order0(grid, c.cutoff());
    for (const auto& v : zero.values) CHECK(v == cplx(0, 0));
    CHECK_THROWS_AS(total_force_spectrum(c, drive50, {-1.0, 0.0, 2.0}, true, false), std::invalid_argument);

    // a profile with f[w] = 0 at w = 0 (sampled odd window) gives no order-1 force there
    std::vector<double> s;
    for (int k = -100; k <= 100; ++k) s.push_back(std::sin(0.05 * k) * 0.5);
    const ModulationProfile odd(SampledWindow{-5.0, 0.05, s});
    CHECK(std::abs(odd.fourier(0.0)) < 1e-15);
    CHECK(std::abs(force1(c, odd, Mirror::right, 0.0)) < 1e-15);
}

TEST_CASE("second order impulse points left", "[force]") {
    const CavityConfig c(1.0, 0.01, 10 * pi);
    const auto fb = total_force_spectrum(c, drive50, {-1.0, 0.0, 1.0}, false, true);
    const auto imp = impulse(fb.total(2));
    CHECK(imp.value < 0.0);
    CHECK(imp.real_within_tolerance());
}

TEST_CASE("time-domain reconstruction", "[force]") {
    const double T = 5.0, Om = 3.0;
    const ModulationProfile p(DampedCosine{Om, T});
    ForceSpectrum fs;
    const double h = pi / (8 * 5 * T);
    const long n = static_cast<long>(2000.0 / h);
    for (long i = -n; i <= n; ++i) {
        fs.omega.push_back(i * h);
        fs.values.push_back(p.fourier(i * h));
    }
    std::vector<double> times;
    for (int i = -50; i <= 50; ++i) times.push_back(i * 5 * T / 50);
    const auto sig = time_domain(fs, times);
    CHECK_FALSE(sig.alias_risk);
    CHECK(sig.max_imag_ratio < 1e-6);
    for (std::size_t i = 0; i < times.size(); ++i) CHECK(std::abs(sig.values[i] - p.eval_time(times[i])) < 1e-4);

    // impulse: the time integral of the reconstructed signal equals F[0]
    ForceSpectrum band;
    const double hb = pi / (4 * 150.0);
    for (long i = -static_cast<long>(50 / hb); i <= static_cast<long>(50 / hb); ++i) {
        band.omega.push_back(i * hb);
        band.values.push_back(p.fourier(i * hb));
    }
    std::vector<double> t2;
    for (int i = -1500; i <= 1500; ++i) t2.push_back(i * 0.1);
    const auto s2 = time_domain(band, t2);
    double integral = 0.0;
    for (std::size_t i = 1; i < t2.size(); ++i) integral += 0.5 * 0.1 * (s2.values[i] + s2.values[i - 1]);
    CHECK(integral == Approx(impulse(band).value).epsilon(1e-3));

    ForceSpectrum z{ForceTarget::total, 1, {-1.0, 0.0, 1.0}, std::vector<cplx>(3), 10.0};
    const auto zs = time_domain(z, {0.0, 1.0});
    CHECK(zs.values[0] == 0.0);
    CHECK(impulse(z).value == 0.0);
    CHECK(time_domain(z, {100.0}).alias_risk);
    ForceSpectrum nozero{ForceTarget::total, 1, {-1.0, 1.0}, std::vector<cplx>(2), 10.0};
    CHECK_THROWS_AS(impulse(nozero), std::invalid_argument);
}
