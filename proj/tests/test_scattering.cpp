#include "casimir/scattering.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace casimir;

TEST_CASE("local mirror limits", "[scattering]") {
    auto t = local_mirror(0.0, 3.0);
    CHECK(t.s_plus == cplx(1, 0));
    CHECK(t.r_plus == cplx(0, 0));
    auto d = local_mirror(std::nullopt, 0.0);
    CHECK(d.s_plus == cplx(0, 0));
    CHECK(d.r_minus == cplx(-1, 0));
    auto m = local_mirror(1.0, 1.0);
    CHECK(std::abs(m.s_plus - cplx(0.5, 0.5)) < 1e-15);
    CHECK(std::abs(m.r_plus - cplx(-0.5, 0.5)) < 1e-15);
    CHECK(std::norm(m.s_plus) == Catch::Approx(0.5));
    CHECK_THROWS_AS(local_mirror(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(local_mirror(-1.0, 1.0), std::invalid_argument);
    auto mm = local_mirror_matrix(std::nullopt, 2.0);
    CHECK(mm(0, 1) == cplx(-1, 0));
    CHECK(mm(0, 0) == cplx(0, 0));
}

TEST_CASE("local mirror unitarity", "[scattering]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> g(0.0, 50.0), w(-40.0, 40.0);
    for (int i = 0; i < 100; ++i) {
        double om = w(rng);
        if (om == 0.0) om = 1.0;
        const auto m = local_mirror(g(rng), om);
        CHECK(std::abs(std::norm(m.s_plus) + std::norm(m.r_plus) - 1.0) < 1e-12);
        CHECK(std::abs(m.s_plus * std::conj(m.r_plus) + m.r_plus * std::conj(m.s_plus)) < 1e-12);
        const Matrix2c u = m.matrix();
        CHECK((u * u.adjoint() - Matrix2c::Identity()).norm() < 1e-12);
    }
}

TEST_CASE("order-0 kernel", "[scattering]") {
    const CavityConfig c(1.0, 0.01);
    const Matrix2c z = dirichlet_kernel0(c, 0.0);
    CHECK(z(0, 1) == cplx(-1, 0));
    CHECK(z(1, 0) == cplx(-1, 0));
    const Matrix2c h = dirichlet_kernel0(c, pi / 2);
    CHECK(std::abs(h(0, 1) - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(h(1, 0) - cplx(1, 0)) < 1e-15);
    for (double w : make_grid(c, 10 * pi, 16).points) {
        const Matrix2c s = dirichlet_kernel0(c, w);
        CHECK((s * s.adjoint() - Matrix2c::Identity()).norm() < 1e-14);
    }
    CHECK_THROWS_AS(dirichlet_kernel0(CavityConfig(1.0, 0.0, 100.0, FiniteG{1.0}), 1.0), std::invalid_argument);
}

TEST_CASE("order-1 and order-2 kernels", "[scattering]") {
    const CavityConfig c(1.0, 0.01);
    const ModulationProfile p(DampedCosine{3.0, 20.0});
    const ScatteringKernels k(c, p);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> w(-20.0, 20.0);

    for (int n = 1; n <= 10; ++n) {
        const double wp = w(rng);
        CHECK(std::abs(kernel1(c, p, n * pi, wp)) < 1e-14);
        CHECK(std::abs(kernel1(c, p, w(rng), -n * pi)) < 1e-14);
        CHECK(std::abs(kernel2(c, p, n * pi, wp, w(rng))) < 1e-14);
        CHECK(std::abs(kernel2(c, p, w(rng), n * pi, w(rng))) < 1e-14);
    }
    CHECK(kernel1(c.with_lambda0(0.0), p, 1.0, 2.0) == cplx(0, 0));

    for (int i = 0; i < 200; ++i) {
        const double a = w(rng), b = w(rng);
        // conjugation property
        CHECK(std::abs(kernel1(c, p, -a, b) - std::conj(kernel1(c, p, a, -b))) <= 1e-12 * std::abs(kernel1(c, p, a, -b)) + 1e-300);
        // exact lambda0 scaling
        const auto c2 = c.with_lambda0(0.02);
        CHECK(kernel1(c2, p, a, b) == 2.0 * kernel1(c, p, a, b));
        const double x = w(rng);
        CHECK(kernel2(c2, p, a, b, x) == 4.0 * kernel2(c, p, a, b, x));
    }

    const Matrix2c m1 = k.order1(1.3, 0.4);
    CHECK(m1(0, 0) == cplx(0, 0));
    CHECK(m1(1, 0) == cplx(0, 0));
    CHECK(m1(1, 1) == cplx(0, 0));
    CHECK(m1(0, 1) == kernel1(c, p, 1.3, 0.4));
    const Matrix2c m2 = k.order2(1.3, 0.4, -0.2);
    CHECK(m2(1, 0) == cplx(0, 0));
    CHECK(m2(0, 1) == kernel2(c, p, 1.3, 0.4, -0.2));

    // continuous limit at w = 0
    CHECK(std::abs(kernel1(c, p, 0.0, 0.7) - kernel1(c, p, 1e-9, 0.7)) < 1e-8 * std::abs(kernel1(c, p, 0.0, 0.7)));
}

TEST_CASE("direct formula check", "[scattering]") {
    const CavityConfig c(1.3, 0.05);
    const ModulationProfile p(GaussianPulse{2.0, 3.0});
    const double L = 1.3;
    for (double w : {0.4, 1.7, 5.2}) {
        for (double wp : {-2.0, 0.3, 3.9}) {
            const cplx I(0, 1);
            const cplx direct = -(I * 0.05 * (1.0 - std::exp(2.0 * I * w * L)) / (2 * w)) * p.fourier(w - wp) *
                                (1.0 - std::exp(-2.0 * I * wp * L));
            CHECK(std::abs(kernel1(c, p, w, wp) - direct) < 1e-13 * std::abs(direct));
        }
    }
}

TEST_CASE("apply to amplitude pair", "[scattering]") {
    const CavityConfig c(1.0, 0.01);
    const auto out = apply(dirichlet_kernel0(c, 0.0), {cplx(0, 0), cplx(2, 0)});
    CHECK(out.right_moving == cplx(-2, 0));
    CHECK(out.left_moving == cplx(0, 0));
}
