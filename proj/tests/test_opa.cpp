#include <doctest.h>

#include <random>

#include "cpsf/opa.hpp"
#include "helpers.hpp"

using namespace cpsf;
using doctest::Approx;

TEST_CASE("opa_susceptibility limits") {
    OpaParams o;
    // no pump, no detuning: diagonal Lorentzian
    for (double w : {-1.0, 0.0, 0.8}) {
        const Matrix2 m = opa_susceptibility(o, w);
        CHECK(std::abs(m(0, 0) - 1.0 / cx(0.5, -w)) < 1e-14);
        CHECK(std::abs(m(0, 1)) == 0.0);
    }

    o.lambda = 0.3;
    const Matrix2 m0 = opa_susceptibility(o, 0.0);
    const double det = 0.25 - 0.09;
    CHECK(std::abs(m0(0, 0) - cx(0.5 / det, 0.0)) < 1e-14);
    CHECK(std::abs(m0(0, 1) - cx(0.3 / det, 0.0)) < 1e-14);
    CHECK(std::abs(m0(1, 0) - cx(0.3 / det, 0.0)) < 1e-14);
}

TEST_CASE("pole reaches the real axis at the stability boundary") {
    OpaParams o;
    o.delta_p = 0.5;
    o.lambda = std::sqrt(0.25 + 0.25);  // exactly on the boundary
    CHECK_FALSE(o.stable());
    // det(-iwI - chi0) = (k/2 - iw+)(k/2 - iw-) - l^2 vanishes at some real w
    double best = 1e300;
    for (int i = 0; i <= 200000; ++i) {
        const double w = -1.0 + 2.0 * i / 200000.0;
        const cx det = (cx(0.5, -(w + o.delta_p))) * (cx(0.5, -(w - o.delta_p))) -
                       o.lambda * o.lambda;
        best = std::min(best, std::abs(det));
    }
    CHECK(best < 1e-4);
}

TEST_CASE("opa_cpsf values and the negativity window") {
    OpaParams o;
    CHECK(opa_cpsf(o, 0.0).a == Approx(4.0).epsilon(1e-14));
    for (double w : {-2.0, 0.3, 1.0})
        CHECK(opa_cpsf(o, w).a == Approx(1.0 / (0.25 + w * w)).epsilon(1e-14));

    // on resonance a(0) = kappa/S > 0 for any stable parameters
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        o.delta_p = 2.0 * u(rng) - 1.0;
        const double lmax = std::sqrt(0.25 + o.delta_p * o.delta_p);
        o.lambda = 0.999 * lmax * u(rng);
        const double s = 0.25 + o.delta_p * o.delta_p - o.lambda * o.lambda;
        CHECK(opa_cpsf(o, 0.0).a == Approx(1.0 / s).epsilon(1e-12));
        CHECK(opa_cpsf(o, 0.0).a > 0.0);
    }

    // xi_k = 1.2, Delta_k = 0.5: window delta_p +- sqrt(l^2 - k^2/4)
    o.lambda = 0.6;
    o.delta_p = 0.5;
    const OpaWindow w = opa_negativity_window(o);
    REQUIRE(w.exists);
    const double dw = std::sqrt(0.36 - 0.25);
    CHECK(dw == Approx(0.3317).epsilon(1e-4));
    CHECK(w.lo == Approx(0.5 - dw).epsilon(1e-12));
    CHECK(w.hi == Approx(0.5 + dw).epsilon(1e-12));
    CHECK(std::abs(opa_cpsf(o, w.lo).a) < 1e-12);
    CHECK(std::abs(opa_cpsf(o, w.hi).a) < 1e-12);
    CHECK(opa_cpsf(o, 0.5 * (w.lo + w.hi)).a < 0.0);
    CHECK(opa_cpsf(o, w.lo - 1e-3).a > 0.0);
    CHECK(opa_cpsf(o, w.hi + 1e-3).a > 0.0);
}

TEST_CASE("negativity occurs iff kappa^2/4 < lambda^2 < kappa^2/4 + delta_p^2") {
    OpaParams o;
    o.delta_p = 0.5;
    o.lambda = 0.4;  // below kappa/2
    CHECK_FALSE(opa_negativity_window(o).exists);
    o.lambda = 0.6;
    CHECK(opa_negativity_window(o).exists);
    o.delta_p = 0.0;
    CHECK_FALSE(opa_negativity_window(o).exists);  // unstable when lambda > kappa/2
}

TEST_CASE("critical nondetuned pump stays finite, detuned boundary poles") {
    OpaParams o;
    o.lambda = 0.5;  // exactly kappa/2, delta_p = 0
    CHECK(opa_cpsf(o, 0.0).a == Approx(1.0).epsilon(1e-12));
    for (double w : {-1.0, 0.3, 2.0})
        CHECK(opa_cpsf(o, w).a == Approx(1.0 / (w * w + 1.0)).epsilon(1e-12));

    // detuned boundary (exact dyadic values): genuine pole at omega = 0
    o.delta_p = 0.375;
    o.lambda = 0.625;
    CHECK_THROWS_AS(opa_cpsf(o, 0.0), std::domain_error);
}

TEST_CASE("nondetuned OPA spectral function is nonnegative") {
    OpaParams o;
    o.lambda = 0.49;
    for (int i = 0; i <= 2000; ++i)
        CHECK(opa_cpsf(o, -3.0 + 6.0 * i / 2000.0).a >= 0.0);
}

TEST_CASE("mirror symmetry in the detuning sign") {
    OpaParams a, b;
    a.lambda = b.lambda = 0.6;
    a.delta_p = 0.5;
    b.delta_p = -0.5;
    for (int i = 0; i <= 500; ++i) {
        const double w = -2.0 + 4.0 * i / 500.0;
        CHECK(opa_cpsf(a, w).a == Approx(opa_cpsf(b, -w).a).epsilon(1e-12));
    }
}

TEST_CASE("opa_cpsf equals -2 Im(-i chi_aa)") {
    OpaParams o;
    o.lambda = 0.6;
    o.delta_p = 0.5;
    for (int i = 0; i <= 500; ++i) {
        const double w = -2.0 + 4.0 * i / 500.0;
        const cx g = cx(0.0, -1.0) * opa_susceptibility(o, w)(0, 0);
        CHECK(opa_cpsf(o, w).a == Approx(-2.0 * g.imag()).epsilon(1e-12));
    }
}

TEST_CASE("opa_self_energy is the constant off-diagonal matrix") {
    OpaParams o;
    CHECK(opa_self_energy(o).norm() == 0.0);

    o.lambda = 0.6;
    o.delta_p = 0.37;
    const Matrix2 s = opa_self_energy(o);
    CHECK(s(0, 1) == cx(0.0, 0.6));
    CHECK(s(1, 0) == cx(0.0, 0.6));
    CHECK(std::abs(s(0, 0)) == 0.0);

    // definition-level oracle: Sigma = i (chi0^-1 - chi^-1) at random frequencies
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 5; ++i) {
        const double w = u(rng);
        const Matrix2 chi = opa_susceptibility(o, w);
        // pumpless chi0^-1 in the pump frame: diag(k/2 - i(w +- delta_p))
        Matrix2 c0inv = Matrix2::Zero();
        c0inv(0, 0) = cx(o.kappa / 2.0, -(w + o.delta_p));
        c0inv(1, 1) = cx(o.kappa / 2.0, -(w - o.delta_p));
        const Matrix2 sigma = cx(0.0, 1.0) * (c0inv - chi.inverse());
        CHECK((sigma - s).norm() < 1e-12);
    }
}
