#include "serrin/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace serrin;

TEST_SUITE_BEGIN("verify");

TEST_CASE("fd_laplacian on closed-form fields") {
    GridSpec g{81, 81, -1, 1, -1, 1};
    Eigen::MatrixXd quad(g.ny, g.nx), harm(g.ny, g.nx);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double x = g.x(i), y = g.y(j);
            quad(j, i) = x * x + y * y;
            harm(j, i) = std::pow(x, 5) - 10.0 * std::pow(x, 3) * y * y +
                         5.0 * x * std::pow(y, 4); // Re (x+iy)^5
        }
    auto lap = fd_laplacian(quad, g.dx(), g.dy());
    double worst = 0;
    for (int j = 2; j < g.ny - 2; ++j)
        for (int i = 2; i < g.nx - 2; ++i) worst = std::max(worst, std::abs(lap(j, i) - 4.0));
    CHECK(worst < 1e-10);
    CHECK(fd_laplacian_max_residual(harm, Eigen::MatrixXd::Zero(g.ny, g.nx), g.dx(), g.dy()) <
          1e-8);
    CHECK_THROWS_AS(fd_laplacian(Eigen::MatrixXd::Zero(3, 3), 0.1, 0.1),
                    std::invalid_argument);
}

TEST_CASE("grid refinement: 4th-order convergence on a smooth field") {
    auto residual = [](int nn) {
        GridSpec g{nn, nn, -1, 1, -1, 1};
        Eigen::MatrixXd f(g.ny, g.nx), rhs(g.ny, g.nx);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double x = g.x(i), y = g.y(j);
                f(j, i) = std::sin(2 * x) * std::exp(y);
                rhs(j, i) = 3.0 * std::sin(2 * x) * std::exp(y); // -(lap f)
            }
        return fd_laplacian_max_residual(f, rhs, g.dx(), g.dy());
    };
    double c = residual(41), fine = residual(81);
    CHECK(c / fine >= 8.0); // at least 8x per halving (expect ~16x)
}

TEST_CASE("hopf estimate: paraboloid gives 0, invariant under constants") {
    GridSpec g{65, 65, -1, 1, -1, 1};
    Eigen::MatrixXd v(g.ny, g.nx), omega = Eigen::MatrixXd::Zero(g.ny, g.nx);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double x = g.x(i), y = g.y(j);
            v(j, i) = 0.7 + 0.3 * x - 0.1 * y - 0.5 * (x * x + y * y);
        }
    auto [m, s] = hopf_estimate(v, omega, g.dx(), g.dy());
    CHECK(std::abs(m) < 1e-9);
    CHECK(s < 1e-9);
    auto [m2, s2] = hopf_estimate((v.array() + 5.0).matrix(), omega, g.dx(), g.dy());
    CHECK(std::abs(m2 - m) < 1e-12);
    CHECK(std::abs(s2 - s) < 1e-12);
}

TEST_CASE("capillary fit on a trivial paraboloid field") {
    GridSpec g{65, 65, -1, 1, -1, 1};
    Eigen::MatrixXd v(g.ny, g.nx);
    Eigen::MatrixXcd G(g.ny, g.nx);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            Complex z(g.x(i), g.y(j));
            G(j, i) = z; // identity chart: omega = 0
            v(j, i) = 0.2 + 0.4 * z.real() - 0.3 * z.imag() - 0.5 * std::norm(z);
        }
    auto fit = capillary_residual(v, G, g, 0.31);
    CHECK(fit.r1 < 1e-10);
    CHECK(fit.r2 < 1e-9);
    CHECK(fit.c == doctest::Approx(1.0).epsilon(1e-10));
    // d1 is not identifiable along an x-column of the identity chart (Re g
    // constant there); d2 is
    CHECK(fit.d2 == doctest::Approx(-0.3).epsilon(1e-9));
}

TEST_CASE("simple_curve_check: circle, figure-eight, tangency") {
    std::vector<Complex> circle, eight;
    for (int k = 0; k < 256; ++k) {
        double t = 2.0 * kPi * (k + 0.37) / 256; // keep the node off the crossing
        circle.push_back(std::exp(Complex(0, t)));
        eight.push_back(Complex(std::sin(2 * t) * 0.5, std::sin(t)));
    }
    auto c = simple_curve_check(circle, true);
    CHECK(c.simple);
    CHECK(c.crossings == 0);
    auto e = simple_curve_check(eight, true);
    CHECK_FALSE(e.simple);
    CHECK(e.crossings == 1);
    CHECK_THROWS_AS(simple_curve_check({Complex(0, 0), Complex(1, 0)}, false),
                    std::invalid_argument);
    std::vector<Complex> dup = circle;
    dup[5] = dup[4];
    CHECK_THROWS_AS(simple_curve_check(dup, true), std::invalid_argument);
    // near-tangential curves report tangencies, not crossings
    std::vector<Complex> kiss;
    for (int k = 0; k <= 128; ++k) {
        double t = -1.0 + 2.0 * k / 128;
        kiss.push_back(Complex(t, t * t));
    }
    for (int k = 0; k <= 128; ++k) {
        double t = 1.0 - 2.0 * k / 128;
        kiss.push_back(Complex(t, -t * t + 1e-12));
    }
    auto kk = simple_curve_check(kiss, false, 1e-9);
    CHECK(kk.crossings == 0);
    CHECK(kk.tangencies > 0);
}

TEST_SUITE_END();
