#include "serrin/quadrature.hpp"
#include "serrin/weierstrass.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace serrin;

TEST_SUITE_BEGIN("special_functions");

TEST_CASE("lattice_from_roots matches the quadrature oracle for (1,0,-1)") {
    auto w = Weierstrass::from_roots(1.0, 0.0, -1.0);
    // omega1 = int_{e1}^{inf} dt/sqrt(4t^3 - g2 t - g3), split at t = 60
    double head = singular_quad(
        [](double t) { return 1.0 / std::sqrt(4.0 * t * (t * t - 1.0)); }, 1.0, 60.0,
        {Endpoint::inv_sqrt, Endpoint::regular}, 1e-12);
    double tail = adaptive_quad(
        [](double u) {
            if (u == 0.0) return 1.0; // integrand -> 1/sqrt(1-u^4)
            double t = 1.0 / (u * u);
            return (1.0 / std::sqrt(4.0 * t * (t * t - 1.0))) * 2.0 / (u * u * u);
        },
        0.0, std::sqrt(1.0 / 60.0), 1e-13);
    CHECK(w.omega1() == doctest::Approx(head + tail).epsilon(1e-9));
    CHECK(w.omega2().imag() == doctest::Approx(w.omega1()).epsilon(1e-12)); // lemniscatic
}

TEST_CASE("root permutation invariance") {
    auto a = Weierstrass::from_roots(0.3, -0.5, 0.2);
    auto b = Weierstrass::from_roots(-0.5, 0.2, 0.3);
    CHECK(a.omega1() == b.omega1());
    CHECK(a.omega2() == b.omega2());
}

TEST_CASE("invalid roots are rejected") {
    CHECK_THROWS_AS(Weierstrass::from_roots(1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(Weierstrass(1.0, 10.0), UnsupportedLatticeError); // negative discriminant
}

TEST_CASE("degenerate double-root lattice is flagged with one infinite half-period") {
    auto w = Weierstrass::from_roots(1.0 / 12, 1.0 / 12, -1.0 / 6);
    CHECK(w.degenerate());
    CHECK(std::isinf(w.omega1()));
    CHECK(w.omega2().imag() == doctest::Approx(3.14159265358979).epsilon(1e-12));
    // hyperbolic closed form still satisfies the defining cubic
    Complex z(0.7, 0.3);
    auto [p, pp] = w.P_and_Pprime(z);
    CHECK(std::abs(pp * pp - (4.0 * p * p * p - w.g2() * p - w.g3())) < 1e-12);
}

TEST_CASE("P satisfies its cubic ODE and periodicity at random points") {
    auto w = Weierstrass::from_roots(0.9, -0.15, -0.75);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ux(-1.9, 1.9), uy(-1.9, 1.9);
    double res = 0, per = 0;
    int tested = 0;
    while (tested < 100) {
        Complex z(ux(rng) * w.omega1(), uy(rng) * w.omega2().imag());
        try {
            auto [p, pp] = w.P_and_Pprime(z);
            res = std::max(res, std::abs(pp * pp - (4.0 * p * p * p - w.g2() * p - w.g3())) /
                                    std::max(1.0, std::abs(p * p * p)));
            per = std::max(per, std::abs(w.P(z + 2.0 * w.omega1()) - p));
            per = std::max(per, std::abs(w.P(z + 2.0 * w.omega2()) - p));
            ++tested;
        } catch (const PoleError&) {
        }
    }
    CHECK(res < 1e-9);
    CHECK(per < 1e-9);
}

TEST_CASE("half-period critical points") {
    auto w = Weierstrass::from_roots(1.1, 0.2, -1.3);
    CHECK(std::abs(w.P(Complex(w.omega1(), 0)) - Complex(w.e1(), 0)) < 1e-12);
    CHECK(std::abs(w.P(w.omega2()) - Complex(w.e3(), 0)) < 1e-12);
    CHECK(std::abs(w.Pprime(Complex(w.omega1(), 0))) < 1e-10);
}

TEST_CASE("zeta and sigma: normalization, oddness, quasi-periodicity, Legendre") {
    auto w = Weierstrass::from_roots(0.52, 0.11, -0.63);
    // sigma(0) = 0 with sigma'(0) = 1
    CHECK(std::abs(w.sigma(Complex(0, 0))) == 0.0);
    double h = 1e-6;
    Complex sp = (w.sigma(Complex(h, 0)) - w.sigma(Complex(-h, 0))) / (2.0 * h);
    CHECK(std::abs(sp - Complex(1, 0)) < 1e-9);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (int k = 0; k < 20; ++k) {
        Complex z(u(rng), u(rng));
        if (std::abs(z) < 0.05) continue;
        CHECK(std::abs(w.zeta(-z) + w.zeta(z)) < 1e-10);
        CHECK(std::abs(w.zeta(z + 2.0 * w.omega1()) - w.zeta(z) - 2.0 * w.eta1()) < 1e-9);
        Complex lhs = w.sigma(z + 2.0 * w.omega2());
        Complex rhs = -w.sigma(z) * std::exp(2.0 * w.eta2() * (z + w.omega2()));
        CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(rhs));
    }
    Complex legendre = w.eta1() * w.omega2() - w.eta2() * w.omega1();
    CHECK(std::abs(legendre - Complex(0, 3.14159265358979324 / 2)) < 1e-12);
    CHECK_THROWS_AS(w.zeta(Complex(0, 0)), PoleError);
}

TEST_CASE("Legendre consistency on the tau = 0.5 band lattice") {
    double tau = 0.5;
    auto w = Weierstrass::from_roots((2 - tau * tau) / (12 * tau), (2 * tau * tau - 1) / (12 * tau),
                                     -(tau * tau + 1) / (12 * tau));
    Complex legendre = w.eta1() * w.omega2() - w.eta2() * w.omega1();
    CHECK(std::abs(legendre - Complex(0, 3.14159265358979324 / 2)) < 1e-9);
}

TEST_CASE("pole error carries the nearest lattice point") {
    auto w = Weierstrass::from_roots(1.0, 0.0, -1.0);
    try {
        w.P(2.0 * w.omega1() + Complex(1e-9, 0));
        FAIL("expected PoleError");
    } catch (const PoleError& e) {
        CHECK(std::abs(e.nearest_lattice_point - 2.0 * w.omega1()) < 1e-8);
    }
}

TEST_CASE("singular_quad closed-form integrals") {
    double pi = singular_quad([](double t) { return 1.0 / std::sqrt(t * (1.0 - t)); }, 0.0, 1.0,
                              {Endpoint::inv_sqrt, Endpoint::inv_sqrt});
    CHECK(pi == doctest::Approx(3.14159265358979324).epsilon(1e-11));
    double two = singular_quad([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0,
                               {Endpoint::inv_sqrt, Endpoint::regular});
    CHECK(two == doctest::Approx(2.0).epsilon(1e-11));
    // the Theta integrand at (eta, tau) = (1, 1): eta sqrt(w/(1+eta^2 w)) with
    // w = 1 -> pi/sqrt(2)
    double th = singular_quad(
        [](double t) {
            (void)t;
            return (1.0 / std::sqrt(2.0)) / std::sqrt(t * (1.0 - t));
        },
        0.0, 1.0, {Endpoint::inv_sqrt, Endpoint::inv_sqrt});
    CHECK(th == doctest::Approx(3.14159265358979324 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("singular_quad reports non-convergence with its best estimate") {
    // an undeclared interior singularity cannot reach 1e-12
    CHECK_THROWS_AS(adaptive_quad([](double t) { return 1.0 / std::sqrt(std::abs(t - 0.5)); },
                                  0.0, 1.0, 1e-12),
                    AccuracyError);
}

TEST_SUITE_END();
