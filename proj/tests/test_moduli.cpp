#include "serrin/moduli.hpp"
#include "serrin/quadrature.hpp"
#include "serrin/ring.hpp"
#include "serrin/types.hpp"
#include "serrin/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace serrin;

TEST_SUITE_BEGIN("moduli");

TEST_CASE("vartheta closed form at tau = 1 and the raw-integral route") {
    CHECK(vartheta(1.0, 1.0) == doctest::Approx(2.0 * kPi / std::sqrt(2.0)).epsilon(1e-11));
    CHECK(vartheta(0.3, 1.0) == doctest::Approx(2.0 * kPi / std::sqrt(1.09)).epsilon(1e-11));
    // two-route check: regularized form vs the raw integral over [2/eta, 2/(eta tau^2)]
    double eta = 1.0, tau = 0.5;
    double k = -eta * tau * tau / 2.0;
    double r1 = 2.0 / (eta * tau * tau), r2 = 2.0 / eta, r3 = -2.0 * eta;
    double raw = singular_quad(
        [&](double z, double, double) {
            double pz = k * (z - r1) * (z - r2) * (z - r3);
            return 2.0 / std::sqrt(pz);
        },
        r2, r1, {Endpoint::inv_sqrt, Endpoint::inv_sqrt}, 1e-11);
    CHECK(vartheta(eta, tau) == doctest::Approx(raw).epsilon(1e-9));
}

TEST_CASE("theta closed form, range, and monotonicity in eta") {
    CHECK(theta_arc(1.0, 1.0) == doctest::Approx(kPi / std::sqrt(2.0)).epsilon(1e-11));
    CHECK(theta_arc(1.0, 1e-4) / kPi == doctest::Approx(0.5).epsilon(1e-3));
    for (double eta : {0.2, 0.7, 2.0, 9.0})
        for (double tau : {0.1, 0.5, 0.9}) {
            double th = theta_arc(eta, tau);
            CHECK(th > 0.0);
            CHECK(th < kPi);
        }
    for (double tau : {0.2, 0.6, 1.0}) {
        double prev = 0;
        for (double eta = 0.2; eta < 3.0; eta += 0.4) {
            double cur = theta_arc(eta, tau);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("eta_level endpoints and monotonicity") {
    for (int n : {2, 3, 4, 6})
        CHECK(eta_level(n, 1.0) == doctest::Approx(1.0 / std::sqrt(n * n - 1.0)).epsilon(1e-12));
    CHECK(eta_level(2, 1e-3) == doctest::Approx(std::tan(kPi / 4.0)).epsilon(1e-3));
    CHECK(eta_level(3, 0.2) > eta_level(3, 0.8));
    for (double tau : {0.05, 0.3, 0.7})
        CHECK(per(eta_level(3, tau), tau) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    // the closed-form eta at tau = 1 continues analytically into the level set
    CHECK(per(eta_level(3, 1.0), 1.0 - 1e-8) == doctest::Approx(1.0 / 3.0).epsilon(1e-7));
}

TEST_CASE("s_star: defining residual, monotonicity, tau -> 0 limit") {
    int n = 3;
    double tau = 0.5, eta = eta_level(n, tau);
    auto cp = solve_coeffs(ModelParams::ring_raw(eta, tau, n));
    double s1 = -1.8, s2 = -1.2;
    double t1 = s_star(cp, s1), t2 = s_star(cp, s2);
    CHECK(t1 < t2); // strictly increasing
    CHECK(std::abs(cp.t(s1) - cp.t(t1)) < 1e-10);
    CHECK_THROWS_AS(s_star(cp, 0.5), std::domain_error);
    CHECK_THROWS_AS(s_star(cp, cp.zeros().x_b_minus - 0.1), std::domain_error);

    // tau -> 0: s* -> s + 2 pi
    double tau0 = 1e-3, eta0 = eta_level(n, tau0);
    auto cp0 = solve_coeffs(ModelParams::ring_raw(eta0, tau0, n));
    double s = -3.0;
    CHECK(s_star(cp0, s) == doctest::Approx(s + 2.0 * kPi).epsilon(1e-3));
}

TEST_CASE("embeddedness thresholds and window") {
    int n = 3;
    double tau = 0.5, eta = eta_level(n, tau);
    auto p = ModelParams::ring_raw(eta, tau, n);
    auto cp = solve_coeffs(p);
    GridSpec tiny{2, 2, 0, 1e-3, 0, 1e-3};
    auto dev = developing_map(p, cp, tiny, true);
    double xhat = embed_xhat(dev, cp);
    CHECK(xhat > cp.zeros().x_b_plus);
    CHECK(xhat < cp.zeros().x_a_plus);
    // for x0 in (0, x_b^+] the arc is convex, hence in-sector
    CHECK(sector_clearance(dev, 0.5 * cp.zeros().x_b_plus) > 0.0);
    CHECK(sector_clearance(dev, cp.zeros().x_b_plus) > 0.0);
    // monotone sign change through xhat (bisection validity)
    CHECK(sector_clearance(dev, xhat - 1e-4) > 0.0);
    CHECK(sector_clearance(dev, xhat + 1e-4) < 0.0);
    // inversion symmetry: the negative-side threshold is -xhat
    CHECK(sector_clearance(dev, -(xhat - 1e-4)) > 0.0);
    CHECK(sector_clearance(dev, -(xhat + 1e-4)) < 0.0);

    auto hb = embed_bounds(dev, cp);
    CHECK(hb[0] < hb[1]);
    CHECK(hb[1] < 0.0);
    CHECK(hb[0] == doctest::Approx(-xhat).epsilon(1e-12));
    CHECK(s_star(cp, hb[1]) == doctest::Approx(xhat).epsilon(1e-9));
}

TEST_CASE("at xhat the closed curve self-touches on the symmetry lines") {
    int n = 3;
    double tau = 0.5, eta = eta_level(n, tau);
    auto p = ModelParams::ring_raw(eta, tau, n);
    auto cp = solve_coeffs(p);
    GridSpec tiny{2, 2, 0, 1e-3, 0, 1e-3};
    auto dev = developing_map(p, cp, tiny, true);
    double xhat = embed_xhat(dev, cp);
    auto curve_at = [&](double x0) {
        std::vector<Complex> c;
        double T = 2.0 * n * dev.vartheta();
        for (int k = 0; k < 4096; ++k) c.push_back(dev.g(Complex(x0, T * k / 4096)));
        return c;
    };
    // exactly at the threshold: n tangential touch points, all on symmetry lines
    auto at = simple_curve_check(curve_at(xhat), true, 1e-6);
    CHECK(at.crossings == 0);
    CHECK(int(at.tangent_points.size()) == n);
    for (Complex pt : at.tangent_points) {
        // nearest symmetry line through the origin at angle k pi / n
        double ang = std::arg(pt);
        double r = std::fmod(std::abs(ang) * n / kPi + 0.5, 1.0);
        CHECK(std::abs(r - 0.5) < 0.05);
    }
    // slightly past: each touch opens into two transversal crossings
    auto past = simple_curve_check(curve_at(xhat + 0.02), true);
    CHECK(past.crossings == 2 * n);
    // slightly inside: simple
    CHECK(simple_curve_check(curve_at(xhat - 0.02), true).simple);
}

TEST_CASE("window limits: tau -> 0 gives (-pi, -pi); tau -> 1 gives (-inf, 0) surrogate") {
    int n = 3;
    {
        double tau = 1e-2, eta = eta_level(n, tau);
        auto p = ModelParams::ring_raw(eta, tau, n);
        auto cp = solve_coeffs(p);
        GridSpec tiny{2, 2, 0, 1e-3, 0, 1e-3};
        auto dev = developing_map(p, cp, tiny, true);
        auto hb = embed_bounds(dev, cp);
        CHECK(std::abs(hb[0] + kPi) < 5e-2);
        CHECK(std::abs(hb[1] + kPi) < 5e-2);
    }
    {
        double tau = 0.999, eta = eta_level(n, tau);
        auto p = ModelParams::ring_raw(eta, tau, n);
        auto cp = solve_coeffs(p);
        GridSpec tiny{2, 2, 0, 1e-3, 0, 1e-3};
        auto dev = developing_map(p, cp, tiny, true);
        auto hb = embed_bounds(dev, cp);
        CHECK(hb[0] < -2.5);
        CHECK(hb[1] > -0.1);
        CHECK(hb[1] < 0.0);
    }
}

TEST_CASE("bifurcation loci: seeds and root residual along the traces") {
    int n = 2;
    auto curves = bifurcation_loci(n, {0.95, 0.9, 0.85, 0.8});
    CHECK(curves.seed1 < 0.0);
    CHECK(curves.upsilon1.size() >= 3);
    CHECK(curves.upsilon2.size() >= 1); // Psi2 seed detected on the tau = 1 edge
    // root condition |b(s) + b(s*)| along Upsilon_1
    for (const auto& pt : curves.upsilon1) {
        if (pt[1] >= 1.0) continue;
        auto p = ModelParams::ring_raw(eta_level(n, pt[1]), pt[1], n);
        auto cp = solve_coeffs(p);
        CHECK(std::abs(psi1(cp, pt[0])) < 1e-8);
    }
    // seed matching at tau = 1: alpha(s1) = -alpha(s1*), beta(s1) = -beta(s1*)
    auto p1 = ModelParams::ring_raw(eta_level(n, 1.0), 1.0, n);
    auto c1 = solve_coeffs(p1, 24.0);
    double s1 = curves.seed1, ss = s_star(c1, s1);
    CHECK(c1.alpha(s1) == doctest::Approx(-c1.alpha(ss)).epsilon(1e-7));
    CHECK(c1.beta(s1) == doctest::Approx(-c1.beta(ss)).epsilon(1e-7));
}

TEST_SUITE_END();
