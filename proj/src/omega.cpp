#include "serrin/omega.hpp"

#include <cmath>

namespace serrin {

namespace {

// Capillary x-ODE state in one of two charts: c = e^{-omega} (Z) while
// moderate, c = e^{omega} (W) where Z grows. cy propagates the y-derivative.
struct ColumnIntegrator {
    const CoeffPair& cp;
    bool w_chart = false;

    using DP = DormandPrince<2>;
    using V2 = DP::Vec;

    DP::Options opt;

    ColumnIntegrator(const CoeffPair& c) : cp(c) {
        opt.abs_tol = 1e-13;
        opt.rel_tol = 1e-12;
        opt.h_max = 0.02;
    }

    V2 rhs(double x, const V2& u) const {
        double a = cp.alpha(x), b = cp.beta(x);
        V2 d;
        if (!w_chart)
            d << 0.5 * (a * u[0] * u[0] + b), a * u[0] * u[1];
        else
            d << -0.5 * (a + b * u[0] * u[0]), -b * u[0] * u[1];
        return d;
    }

    // advance (x, u) to x_to, switching charts at accepted endpoints
    void advance(double& x, V2& u, double x_to) {
        DP dp([this](double t, const V2& v) { return rhs(t, v); }, opt);
        auto run = dp.integrate(x, u, x_to);
        if (!run.reached) throw OutOfStripError("omega integration left the maximal strip");
        x = x_to;
        u = run.nodes.back().y;
        if (u[0] <= 0.0) throw OutOfStripError("omega integration left the maximal strip");
        if (u[0] > 2.0) { // switch representation
            u[1] = -u[1] / (u[0] * u[0]);
            u[0] = 1.0 / u[0];
            w_chart = !w_chart;
        }
    }

    double omega(const V2& u) const { return w_chart ? std::log(u[0]) : -std::log(u[0]); }
    double omega_y(const V2& u) const { return w_chart ? u[1] / u[0] : -u[1] / u[0]; }
    double expw(const V2& u) const { return w_chart ? u[0] : 1.0 / u[0]; }
};

void check_strip(const ModelParams& p, const CoeffPair& cp, const GridSpec& g) {
    double lo, hi;
    if (p.kind == DomainKind::ring) {
        lo = cp.zeros().x_b_minus;
        hi = cp.zeros().x_a_plus;
    } else {
        hi = cp.zeros().x_a_plus;
        lo = -hi;
    }
    if (g.x0 <= lo || g.x1 >= hi)
        throw OutOfStripError("grid x-range touches the maximal strip boundary");
}

} // namespace

OmegaField omega_field(const ModelParams& p, const CoeffPair& coeffs, const GridSpec& grid) {
    check_strip(p, coeffs, grid);
    auto prof = boundary_profile(p);
    OmegaField of;
    of.grid = grid;
    of.vartheta = prof.half_period();
    of.omega.resize(grid.ny, grid.nx);
    of.omega_y.resize(grid.ny, grid.nx);

    // x-node indices split by sign around 0
    parallel_for(grid.ny, [&](int j) {
        double y = grid.y(j);
        double z0 = prof(y), z0p = prof.deriv(y);
        auto start = [&](ColumnIntegrator& ci) {
            ColumnIntegrator::V2 u;
            if (z0 > 2.0) {
                ci.w_chart = true;
                u << 1.0 / z0, -z0p / (z0 * z0);
            } else {
                u << z0, z0p;
            }
            return u;
        };
        // rightward
        {
            ColumnIntegrator ci(coeffs);
            auto u = start(ci);
            double x = 0.0;
            for (int i = 0; i < grid.nx; ++i) {
                double xi = grid.x(i);
                if (xi < 0.0) continue;
                ci.advance(x, u, xi);
                of.omega(j, i) = ci.omega(u);
                of.omega_y(j, i) = ci.omega_y(u);
            }
        }
        // leftward
        {
            ColumnIntegrator ci(coeffs);
            auto u = start(ci);
            double x = 0.0;
            for (int i = grid.nx - 1; i >= 0; --i) {
                double xi = grid.x(i);
                if (xi >= 0.0) continue;
                ci.advance(x, u, xi);
                of.omega(j, i) = ci.omega(u);
                of.omega_y(j, i) = ci.omega_y(u);
            }
        }
    });
    return of;
}

OdeMapSamples developing_map_ode(const ModelParams& p, const CoeffPair& coeffs,
                                 const GridSpec& grid) {
    check_strip(p, coeffs, grid);
    auto prof = boundary_profile(p);
    OdeMapSamples ms;
    ms.grid = grid;
    ms.G.resize(grid.ny, grid.nx);
    ms.Gp.resize(grid.ny, grid.nx);

    // Phi(y) = int_0^y dt / profile(t), fixing the x = 0 Cauchy data of g
    std::vector<double> phi(grid.ny);
    {
        using DP1 = DormandPrince<1>;
        DP1::Options o;
        o.abs_tol = 1e-13;
        o.rel_tol = 1e-12;
        DP1 dp([&](double t, const DP1::Vec&) {
            DP1::Vec d;
            d << 1.0 / prof(t);
            return d;
        }, o);
        DP1::Vec u;
        u << 0.0;
        double y = 0.0;
        // grid.y0 may be nonzero; integrate from 0 to each node in order
        std::vector<int> order(grid.ny);
        for (int j = 0; j < grid.ny; ++j) order[j] = j;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return std::abs(grid.y(a)) < std::abs(grid.y(b)); });
        for (int j : order) {
            auto run = dp.integrate(y, u, grid.y(j));
            u = run.nodes.back().y;
            y = grid.y(j);
            phi[j] = u[0];
        }
    }

    const bool ring = p.kind == DomainKind::ring;
    parallel_for(grid.ny, [&](int j) {
        double y = grid.y(j);
        double z0 = prof(y), z0p = prof.deriv(y);
        Complex g0, gp0;
        if (ring) {
            Complex ph = std::exp(Complex(0, kPi - phi[j]));
            g0 = ph;
            gp0 = -(1.0 / z0) * ph;
        } else {
            g0 = Complex(-phi[j], 0.0);
            gp0 = Complex(0, 1.0 / z0);
        }
        // state: (c, cy, Re g, Im g, Re g', Im g')
        using DP = DormandPrince<6>;
        using V6 = DP::Vec;
        struct Chart {
            bool w = false;
        } chart;
        auto rhs = [&](double x, const V6& u) {
            double a = coeffs.alpha(x), b = coeffs.beta(x);
            double wx, wy;
            if (!chart.w) {
                wx = -0.5 * (a * u[0] + b / u[0]);
                wy = -u[1] / u[0];
            } else {
                wx = -0.5 * (a / u[0] + b * u[0]);
                wy = u[1] / u[0];
            }
            Complex gp(u[4], u[5]);
            Complex gpp = gp * Complex(wx, -wy); // g'' = 2 omega_z g'
            V6 d;
            if (!chart.w)
                d << 0.5 * (a * u[0] * u[0] + b), a * u[0] * u[1], u[4], u[5], gpp.real(),
                    gpp.imag();
            else
                d << -0.5 * (a + b * u[0] * u[0]), -b * u[0] * u[1], u[4], u[5], gpp.real(),
                    gpp.imag();
            return d;
        };
        DP::Options o;
        o.abs_tol = 1e-13;
        o.rel_tol = 1e-12;
        o.h_max = 0.02;
        auto sweep = [&](bool rightward) {
            chart.w = z0 > 2.0;
            V6 u;
            if (chart.w)
                u << 1.0 / z0, -z0p / (z0 * z0), g0.real(), g0.imag(), gp0.real(), gp0.imag();
            else
                u << z0, z0p, g0.real(), g0.imag(), gp0.real(), gp0.imag();
            double x = 0.0;
            DP dp(rhs, o);
            for (int k = 0; k < grid.nx; ++k) {
                int i = rightward ? k : grid.nx - 1 - k;
                double xi = grid.x(i);
                if ((rightward && xi < 0.0) || (!rightward && xi >= 0.0)) continue;
                auto run = dp.integrate(x, u, xi);
                if (!run.reached) throw OutOfStripError("map integration left the strip");
                x = xi;
                u = run.nodes.back().y;
                if (u[0] <= 0.0) throw OutOfStripError("map integration left the strip");
                if (u[0] > 2.0) {
                    u[1] = -u[1] / (u[0] * u[0]);
                    u[0] = 1.0 / u[0];
                    chart.w = !chart.w;
                }
                ms.G(j, i) = Complex(u[2], u[3]);
                ms.Gp(j, i) = Complex(u[4], u[5]);
            }
        };
        sweep(true);
        sweep(false);
        if (grid.x0 <= 0.0 && 0.0 <= grid.x1) {
            // exact column at x = 0 if it is a node
            for (int i = 0; i < grid.nx; ++i)
                if (grid.x(i) == 0.0) {
                    ms.G(j, i) = g0;
                    ms.Gp(j, i) = gp0;
                }
        }
    });
    return ms;
}

} // namespace serrin
