#include "serrin/band.hpp"

#include "serrin/quadrature.hpp"
#include "serrin/verify.hpp"

#include <cmath>

namespace serrin {

Complex BandMap::g(Complex z) const {
    if (flat_) return Complex(0, 1) * z;
    double om1 = x_max_;
    return Complex(0, 1) *
           (-4.0 * wp_->zeta(z + om1) + lin_ * z + 4.0 * wp_->eta1());
}

Complex BandMap::gprime(Complex z) const {
    if (flat_) return Complex(0, 1);
    return Complex(0, 1) * (4.0 * wp_->P(z + x_max_) + lin_);
}

Jet BandMap::eta_jet(Complex z, int order) const {
    if (flat_) return Jet::constant(order, Complex(0, 0));
    Complex Z = z + x_max_;
    auto [p, pp] = wp_->P_and_Pprime(Z);
    Jet P = Jet::weierstrass_p(order + 2, p, pp, wp_->g2());
    Jet gp = (P * Complex(4, 0)) + Complex(lin_, 0); // g'/i
    Jet eta = (gp.derivative() / gp) * Complex(0.5, 0);
    Jet out(order, Complex(0, 0));
    for (int k = 0; k <= order; ++k) out[k] = eta[k];
    return out;
}

BandMap band_map(double tau, std::optional<GridSpec> grid) {
    if (!(tau > 0.0) || tau > 1.0) throw std::domain_error("band requires tau in (0, 1]");
    BandMap bm;
    bm.tau_ = tau;
    bm.lin_ = (tau + 1.0 / tau) / 3.0;
    if (tau > 1.0 - 1e-8) {
        bm.flat_ = true;
        bm.vartheta_ = kPi;
        bm.x_max_ = std::numeric_limits<double>::infinity();
        bm.shift_ = Complex(0, 0);
    } else {
        double e1 = (2.0 - tau * tau) / (12.0 * tau);
        double e2 = (2.0 * tau * tau - 1.0) / (12.0 * tau);
        double e3 = -(tau * tau + 1.0) / (12.0 * tau);
        bm.wp_ = std::make_shared<Weierstrass>(Weierstrass::from_roots(e1, e2, e3));
        bm.x_max_ = bm.wp_->omega1();
        bm.vartheta_ = bm.wp_->omega2().imag();
        bm.shift_ = bm.g(2.0 * bm.wp_->omega2());
        // initial data of the construction
        Complex gp0 = bm.gprime(Complex(0, 0));
        if (std::abs(bm.g(Complex(0, 0))) > 1e-10 ||
            std::abs(gp0 - Complex(0, 1.0 / tau)) > 1e-8 / tau)
            throw std::runtime_error("band map fails its initial conditions");
    }
    if (grid) {
        bm.grid = *grid;
        bm.G.resize(grid->ny, grid->nx);
        bm.Gp.resize(grid->ny, grid->nx);
        for (int j = 0; j < grid->ny; ++j)
            for (int i = 0; i < grid->nx; ++i) {
                Complex z(grid->x(i), grid->y(j));
                bm.G(j, i) = bm.g(z);
                bm.Gp(j, i) = bm.gprime(z);
            }
    }
    return bm;
}

double x_sharp() {
    return bisect([](double x) { return x - 1.0 / std::tanh(x); }, 1.0, 2.0, 1e-14);
}

double BandSolution::a_of(double x) const {
    // a'(x) = 2 A(x) / alpha(x)^2, regular at 0; quadrature from x*
    auto aprime = [this](double t) {
        if (std::abs(t) < 1e-4) {
            double d = coeffs->delta();
            return 2.0 * t / 3.0 - 4.0 * d * t * t * t / 45.0;
        }
        double al = coeffs->alpha(t);
        return 2.0 * coeffs->int_alpha2(t) / (al * al);
    };
    return a_const + adaptive_quad(aprime, x_star, x, 1e-12);
}

BandSolution band_solution(double tau, const BandMap& map,
                           std::optional<GridSpec> grid_override) {
    BandSolution bs;
    bs.tau = tau;
    bs.map = std::make_shared<BandMap>(map);
    bs.vartheta = map.vartheta();
    bs.period_shift = map.period_shift();

    auto p = ModelParams::band(tau);
    auto cp = solve_coeffs(p);
    bs.coeffs = std::make_shared<CoeffPair>(cp);

    if (map.flat()) {
        bs.x_star = x_sharp();
        bs.b_boundary = -2.0 * bs.x_star; // -2 coth(x#) = -2 x#
    } else {
        double xa = cp.zeros().x_a_plus;
        double hi = std::min(xa, cp.x_hi()) - 1e-9;
        if (cp.h(hi) >= 0.0)
            throw std::runtime_error("band width root not bracketed in (0, x_a^+)");
        bs.x_star = bisect([&](double x) { return cp.h(x); }, 1e-6, hi, 1e-13);
        bs.b_boundary = bs.b_of(bs.x_star);
    }
    bs.a_const = 0.0;
    // fix a(x*) = 0; a_of integrates from x_star so the constant is zero

    GridSpec g;
    if (grid_override) {
        g = *grid_override;
        if (g.x0 == g.x1) { // only the resolution was given
            g.x0 = -bs.x_star;
            g.x1 = bs.x_star;
            g.y0 = 0.0;
            g.y1 = 2.0 * bs.vartheta;
        }
    } else {
        // features sharpen at scale sqrt(tau) toward the disk-chain end, so
        // the default density grows below the asymptotic regime tau < 0.2
        int f = tau < 0.2 ? std::min(10, int(std::ceil(2.0 * std::sqrt(0.2 / tau)))) : 1;
        g.nx = 200 * f + 1;
        g.ny = 400 * f + 1;
        g.x0 = -bs.x_star;
        g.x1 = bs.x_star;
        g.y0 = 0.0;
        g.y1 = 2.0 * bs.vartheta;
    }
    bs.grid = g;
    bs.G.resize(g.ny, g.nx);
    bs.Gp.resize(g.ny, g.nx);
    bs.omega.resize(g.ny, g.nx);
    bs.L.resize(g.ny, g.nx);
    bs.v.resize(g.ny, g.nx);

    const double delta = cp.delta();
    // a(x) profile on the x-grid by one sweep of the a' quadrature
    Eigen::VectorXd aprof(g.nx);
    {
        auto aprime = [&](double t) {
            if (std::abs(t) < 1e-4) return 2.0 * t / 3.0 - 4.0 * delta * t * t * t / 45.0;
            double al = cp.alpha(t);
            return 2.0 * cp.int_alpha2(t) / (al * al);
        };
        using DP = DormandPrince<1>;
        DP::Options o;
        o.abs_tol = 1e-13;
        o.rel_tol = 1e-12;
        DP dp([&](double t, const DP::Vec&) {
            DP::Vec d;
            d << aprime(t);
            return d;
        }, o);
        DP::Vec u;
        u << 0.0;
        double x = bs.x_star; // integrate from x* leftwards across the grid
        for (int i = g.nx - 1; i >= 0; --i) {
            double xi = g.x(i);
            if (xi > bs.x_star) continue;
            auto run = dp.integrate(x, u, xi);
            u = run.nodes.back().y;
            x = xi;
            aprof(i) = u[0];
        }
        // nodes right of x*, if any (grid override wider than the domain)
        u << 0.0;
        x = bs.x_star;
        for (int i = 0; i < g.nx; ++i) {
            double xi = g.x(i);
            if (xi <= bs.x_star) continue;
            auto run = dp.integrate(x, u, xi);
            u = run.nodes.back().y;
            x = xi;
            aprof(i) = u[0];
        }
    }

    parallel_for(g.ny, [&](int j) {
        for (int i = 0; i < g.nx; ++i) {
            double x = g.x(i);
            Complex z(x, g.y(j));
            Complex gv = map.g(z), gp = map.gprime(z);
            bs.G(j, i) = gv;
            bs.Gp(j, i) = gp;
            double ew = std::abs(gp);
            bs.omega(j, i) = std::log(ew);
            bs.L(j, i) = gv.imag();
            // v = a + h (e^omega + A/alpha), the x = 0 singularity removed
            double Aoa;
            if (std::abs(x) < 1e-4)
                Aoa = x * x / 3.0 + delta * x * x * x * x / 90.0;
            else
                Aoa = cp.int_alpha2(x) / cp.alpha(x);
            bs.v(j, i) = aprof(i) + cp.h(x) * (ew + Aoa);
        }
    });
    return bs;
}

std::vector<Complex> BandSolution::boundary_curve(bool upper, int samples, int periods) const {
    std::vector<Complex> out;
    out.reserve(samples);
    double x0 = upper ? x_star : -x_star;
    double T = 2.0 * vartheta * periods;
    for (int k = 0; k < samples; ++k) out.push_back(map->g(Complex(x0, T * k / samples)));
    return out;
}

BandLimitReport band_limits(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw std::domain_error("band_limits needs tau in (0,1)");
    BandLimitReport r;
    r.tau = tau;
    auto bm = band_map(tau);
    GridSpec coarse{65, 129, 0, 0, 0, 0}; // only x* and the curves are used
    auto bs = band_solution(tau, bm, coarse);
    double mu = std::sqrt(tau);
    r.x_star_scaled = bs.x_star / mu;
    r.x_star_gap = std::abs(r.x_star_scaled - kPi / 2.0);

    // rescaled fundamental boundary piece vs the circle of radius 2; the
    // window [-vartheta, vartheta] is centred on one bump, so the upper and
    // lower curves together wrap a single disk of the limit chain
    int m = 4096;
    std::vector<Complex> piece;
    piece.reserve(2 * m + 2);
    for (int k = 0; k <= m; ++k) {
        double y = bs.vartheta * (2.0 * k / m - 1.0);
        piece.push_back(mu * bm.g(Complex(bs.x_star, y)));
    }
    for (int k = 0; k <= m; ++k) {
        double y = bs.vartheta * (2.0 * k / m - 1.0);
        piece.push_back(mu * bm.g(Complex(-bs.x_star, y)));
    }
    // recentre the piece: its own period cell is centred at the mean of the
    // period shift ends; the limit disk is centred at the origin by symmetry
    Complex centre(0, 0);
    // max distance from circle both ways
    double worst1 = 0;
    for (Complex w : piece) worst1 = std::max(worst1, std::abs(std::abs(w - centre) - 2.0));
    std::vector<Complex> circle;
    for (int k = 0; k < m; ++k)
        circle.push_back(2.0 * std::exp(Complex(0, 2.0 * kPi * k / m)));
    double worst2 = 0;
    for (Complex c : circle) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < piece.size(); ++i) {
            if (i == std::size_t(m)) continue; // seam between the two curves
            Complex s = piece[i], t = piece[i + 1];
            Complex d = t - s;
            double L2 = std::norm(d);
            if (L2 == 0) continue;
            double u = std::clamp(((c - s).real() * d.real() + (c - s).imag() * d.imag()) / L2,
                                  0.0, 1.0);
            best = std::min(best, std::abs(c - (s + u * d)));
        }
        worst2 = std::max(worst2, best);
    }
    r.hausdorff_to_disk = std::max(worst1, worst2);

    // sup |g_mu'(z) - 2i/(1+cos z)| over a compact grid, where
    // g_mu(z) = mu g(mu z) so g_mu' = mu^2 g'(mu z)
    double worst3 = 0;
    for (double xr = -1.2; xr <= 1.2; xr += 0.1)
        for (double yi = -1.0; yi <= 1.0; yi += 0.1) {
            Complex z(xr, yi);
            Complex lim = Complex(0, 2) / (1.0 + std::cos(z));
            worst3 = std::max(worst3, std::abs(mu * mu * bm.gprime(mu * z) - lim));
        }
    r.gprime_gap = worst3;
    return r;
}

BandEmbeddedReport band_embedded_check(const BandSolution& sol) {
    BandEmbeddedReport r;
    if (sol.map->flat()) {
        r.embedded = r.separated = r.graphs = true;
        r.critical_points = 0;
        return r;
    }
    const auto& bm = *sol.map;
    const double th = sol.vartheta;
    const int m = 4096;
    // critical points of Im g(x* + iy) counted circularly over one period
    // (samples at half-offsets avoid the exact zeros at y = k th)
    int crit = 0;
    bool sep = true, graphs = true;
    std::vector<double> dims(m), dres(m);
    for (int k = 0; k < m; ++k) {
        double y = 2.0 * th * (k + 0.5) / m;
        Complex dgdy = bm.gprime(Complex(sol.x_star, y)) * Complex(0, 1);
        dims[k] = dgdy.imag();
        dres[k] = dgdy.real();
        if (bm.g(Complex(sol.x_star, y)).imag() <= 0.0) sep = false;
    }
    for (int k = 0; k < m; ++k) {
        if (dims[k] * dims[(k + 1) % m] < 0) ++crit;
        if (dres[k] * dres[(k + 1) % m] < 0) graphs = false;
    }
    r.critical_points = crit;
    r.separated = sep;
    r.graphs = graphs;
    r.embedded = sep && graphs && crit == 2;
    return r;
}

} // namespace serrin
