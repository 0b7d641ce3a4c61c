#include "serrin/coeffs.hpp"
#include "serrin/omega.hpp"
#include "serrin/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace serrin;

TEST_SUITE_BEGIN("ode_core");

TEST_CASE("ring first integrals and zero ordering") {
    auto p = ModelParams::ring_raw(0.7, 0.5, 3);
    auto cp = solve_coeffs(p);
    CHECK(cp.kappa1() == doctest::Approx(0.7 * 0.25 / 4.0).epsilon(1e-14));
    CHECK(cp.kappa_drift() < 1e-9);
    auto z = cp.zeros();
    CHECK(z.x_a_minus < z.x_b_minus);
    CHECK(z.x_b_minus < 0);
    CHECK(0 < z.x_b_plus);
    CHECK(z.x_b_plus < z.x_a_plus);
    CHECK(std::abs(cp.alpha(z.x_a_plus)) < 1e-11);
    CHECK(std::abs(cp.beta(z.x_b_plus)) < 1e-11);
    CHECK(std::abs(cp.beta(z.x_b_minus)) < 1e-11);
}

TEST_CASE("ring quartic identity for s = alpha beta") {
    auto p = ModelParams::ring_raw(0.46254052204235, 0.5, 3);
    auto cp = solve_coeffs(p);
    double worst = 0;
    for (double x = cp.zeros().x_b_minus; x < cp.zeros().x_a_plus; x += 0.01) {
        double a = cp.alpha(x), ap = cp.alpha_prime(x), b = cp.beta(x), bp = cp.beta_prime(x);
        double sv = a * b, sp = ap * b + a * bp;
        double rhs = 4.0 * (-sv * sv * sv + cp.delta() * sv * sv + cp.kappa2() * sv +
                            cp.kappa1() * cp.kappa1() / 4.0);
        worst = std::max(worst, std::abs(sp * sp - rhs));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("ring tau = 1: alpha vanishes only at 0; beta has a single positive zero") {
    auto p = ModelParams::ring_raw(1.0 / std::sqrt(3.0), 1.0, 2);
    auto cp = solve_coeffs(p, 30.0);
    auto z = cp.zeros();
    CHECK(std::isinf(z.x_b_minus));
    CHECK(std::isinf(z.x_a_plus));
    CHECK(z.x_b_plus > 0);
    CHECK(std::isfinite(z.x_b_plus));
}

TEST_CASE("band: tanh at tau = 1, exact beta = -alpha, Wronskian") {
    auto c1 = solve_coeffs(ModelParams::band(1.0), 8.0);
    double worst = 0;
    for (double x = -5.0; x <= 5.0; x += 0.01)
        worst = std::max(worst, std::abs(c1.alpha(x) - std::tanh(x)));
    CHECK(worst < 1e-9);

    auto cp = solve_coeffs(ModelParams::band(0.5));
    for (double x = -2.0; x <= 2.0; x += 0.37) CHECK(cp.beta(x) == -cp.alpha(x));
    double wr = 0;
    double xa = cp.zeros().x_a_plus;
    for (double x = -0.99 * xa; x < 0.99 * xa; x += 0.003)
        wr = std::max(wr, std::abs(cp.alpha_prime(x) * cp.h(x) - cp.h_prime(x) * cp.alpha(x) -
                                   2.0));
    CHECK(wr < 1e-9);
}

TEST_CASE("boundary profile: range equals the positive roots, even and periodic") {
    auto p = ModelParams::ring_raw(0.7, 0.5, 3);
    auto bp = boundary_profile(p);
    CHECK(bp.z_min() == doctest::Approx(2.0 / 0.7).epsilon(1e-13));
    CHECK(bp.z_max() == doctest::Approx(2.0 / (0.7 * 0.25)).epsilon(1e-10));
    CHECK(std::abs(bp(0.4) - bp(-0.4)) < 1e-12);
    CHECK(std::abs(bp(0.3 + 2.0 * bp.half_period()) - bp(0.3)) < 1e-10);

    auto bq = boundary_profile(ModelParams::ring_raw(0.9, 1.0, 2));
    CHECK(bq.constant());
    CHECK(bq(1.7) == doctest::Approx(2.0 / 0.9));

    auto bb = boundary_profile(ModelParams::band(1.0));
    CHECK(bb.constant());
    CHECK(bb(0.2) == doctest::Approx(1.0));
    auto bb5 = boundary_profile(ModelParams::band(0.5));
    CHECK(bb5.z_min() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bb5.z_max() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("omega field: tau = 1 closed form and out-of-strip guard") {
    double eta = 1.0 / std::sqrt(3.0);
    auto p = ModelParams::ring_raw(eta, 1.0, 2);
    auto cp = solve_coeffs(p, 30.0);
    GridSpec gs{41, 41, -2, 2, 0, 4};
    auto of = omega_field(p, cp, gs);
    double c1 = eta / 2.0, worst = 0;
    for (int j = 0; j < gs.ny; ++j)
        for (int i = 0; i < gs.nx; ++i)
            worst = std::max(worst, std::abs(of.omega(j, i) - (-c1 * gs.x(i) + std::log(c1))));
    CHECK(worst < 1e-10);

    auto p5 = ModelParams::ring_raw(0.7, 0.5, 3);
    auto cp5 = solve_coeffs(p5);
    GridSpec bad{33, 65, cp5.zeros().x_b_minus - 0.1, 1.0, 0, 1};
    CHECK_THROWS_AS(omega_field(p5, cp5, bad), OutOfStripError);
}

TEST_CASE("omega field: harmonicity, evenness, reflection symmetry, y-squared identity") {
    auto p = ModelParams::ring_raw(0.7, 0.5, 3);
    auto cp = solve_coeffs(p);
    auto zs = cp.zeros();
    auto prof = boundary_profile(p);
    double th = prof.half_period();
    GridSpec gs{161, 401, 0.6 * zs.x_b_minus, 0.6 * zs.x_a_plus, -th, th};
    auto of = omega_field(p, cp, gs);
    CHECK(fd_laplacian_max_residual(of.omega, Eigen::MatrixXd::Zero(gs.ny, gs.nx), gs.dx(),
                                    gs.dy()) < 1e-6);
    double ev = 0;
    for (int j = 0; j < gs.ny; ++j)
        for (int i = 0; i < gs.nx; ++i)
            ev = std::max(ev, std::abs(of.omega(j, i) - of.omega(gs.ny - 1 - j, i)));
    CHECK(ev < 1e-11); // omega(x, -y) = omega(x, y)

    // omega(x, k th + y) = omega(x, k th - y) across k = 1
    GridSpec g2{41, 41, 0.4 * zs.x_b_minus, 0.4 * zs.x_a_plus, 0.0, 2.0 * th};
    auto of2 = omega_field(p, cp, g2);
    double sym = 0;
    for (int j = 0; j < g2.ny; ++j)
        for (int i = 0; i < g2.nx; ++i)
            sym = std::max(sym, std::abs(of2.omega(j, i) - of2.omega(g2.ny - 1 - j, i)));
    CHECK(sym < 1e-9);

    // 4 e^{-2w} w_y^2 identity against the coefficient data
    double idw = 0;
    for (int j = 0; j < gs.ny; ++j)
        for (int i = 0; i < gs.nx; ++i) {
            double x = gs.x(i), w = of.omega(j, i), wy = of.omega_y(j, i);
            double a = cp.alpha(x), ap = cp.alpha_prime(x), b = cp.beta(x),
                   bp = cp.beta_prime(x);
            double E = std::exp(-w);
            double lhs = 4.0 * E * E * wy * wy;
            double rhs = -a * a * E * E * E * E - 4.0 * ap * E * E * E +
                         (6.0 * a * b - 4.0 * cp.delta()) * E * E + 4.0 * bp * E - b * b;
            idw = std::max(idw, std::abs(lhs - rhs));
        }
    CHECK(idw < 1e-7);
}

TEST_SUITE_END();
