#include "serrin/moduli.hpp"

#include "serrin/quadrature.hpp"
#include "serrin/ring.hpp"
#include "serrin/types.hpp"

#include <cmath>
#include <sstream>

namespace serrin {

double vartheta(double eta, double tau) {
    auto f = [=](double, double da, double db) {
        double w = 1.0 - da * (1.0 - tau * tau); // 1 + t(tau^2-1), t = da
        return 2.0 / std::sqrt(da * db * w * (1.0 + eta * eta * w));
    };
    return singular_quad(std::function<double(double, double, double)>(f), 0.0, 1.0,
                         {Endpoint::inv_sqrt, Endpoint::inv_sqrt}, 1e-12);
}

double theta_arc(double eta, double tau) {
    auto f = [=](double, double da, double db) {
        double w = 1.0 - da * (1.0 - tau * tau);
        return eta * std::sqrt(w / (1.0 + eta * eta * w)) / std::sqrt(da * db);
    };
    return singular_quad(std::function<double(double, double, double)>(f), 0.0, 1.0,
                         {Endpoint::inv_sqrt, Endpoint::inv_sqrt}, 1e-12);
}

double eta_level(int n, double tau) {
    if (n < 2) throw std::domain_error("eta_level requires n >= 2");
    if (tau > 1.0 - 1e-8) return 1.0 / std::sqrt(double(n) * n - 1.0);
    if (tau < 1e-8) return std::tan(kPi / (2.0 * n));
    double target = 1.0 / double(n);
    double lo = 1e-8, hi = 1.0;
    while (per(hi, tau) < target) {
        hi *= 2.0;
        if (hi > 1e8) throw std::runtime_error("eta_level: bracket failure");
    }
    return bisect([&](double e) { return per(e, tau) - target; }, lo, hi, 1e-13);
}

double s_star(const CoeffPair& coeffs, double s) {
    const auto& z = coeffs.zeros();
    if (!(s > z.x_b_minus && s < 0.0)) throw std::domain_error("s must lie in (x_b^-, 0)");
    double tv = coeffs.t(s);
    double lo = z.x_b_plus + 1e-13;
    double hi = std::min(z.x_a_plus, coeffs.x_hi()) - 1e-13;
    // expand toward x_a^+ until t drops below t(s); t decreases to -inf there
    double probe = 0.5 * (lo + hi);
    while (coeffs.t(probe) > tv && hi - probe > 1e-14) probe = hi - (hi - probe) * 0.25;
    if (coeffs.t(probe) > tv) throw std::runtime_error("s_star: bracket failure near x_a^+");
    double out = bisect([&](double x) { return coeffs.t(x) - tv; }, lo, probe, 1e-13);
    // t' = -kappa1/alpha^2 can be huge near x_a^+; accept the x-accurate
    // root when the t-residual is consistent with the local slope
    double slope = std::abs(coeffs.kappa1()) / (coeffs.alpha(out) * coeffs.alpha(out));
    if (coeffs.kind() == DomainKind::band) slope = 2.0 / (coeffs.alpha(out) * coeffs.alpha(out));
    double allow = std::max(1e-10 * std::max(1.0, std::abs(tv)), 1e-11 * slope);
    if (std::abs(coeffs.t(out) - tv) > allow)
        throw std::runtime_error("s_star: residual too large");
    return out;
}

double s_star_inverse(const CoeffPair& coeffs, double target) {
    const auto& z = coeffs.zeros();
    double lo = std::max(z.x_b_minus, coeffs.x_lo()) + 1e-9;
    // expand the right end toward 0^- only as far as needed (s* -> x_a^+
    // there, which exhausts floating resolution)
    double hi = -0.05;
    if (hi <= lo) hi = 0.5 * lo;
    while (s_star(coeffs, hi) < target && hi < -1e-10) hi *= 0.5;
    if (s_star(coeffs, hi) < target)
        throw std::runtime_error("s_star_inverse: target beyond resolvable window");
    return bisect([&](double s) { return s_star(coeffs, s) - target; }, lo, hi, 1e-13);
}

// signed clearance of the arc y in (0, vartheta) from the sector boundary;
// positive while strictly inside S0
double sector_clearance(const DevelopingMap& dev, double x0, int samples) {
    const int n = dev.n();
    const double th = dev.vartheta();
    const double rot = -(kPi - kPi / n); // rotate L1 to the real axis
    auto barrier = [&](double y) {
        Complex w = dev.g(Complex(x0, y));
        double b1 = (std::exp(Complex(0, rot)) * w).imag(); // >0 inside (L1 side)
        double b2 = w.imag();                               // >0 inside (L0 side)
        return std::min(b1, b2);
    };
    double best = std::numeric_limits<double>::infinity();
    double ybest = 0;
    for (int k = 1; k < samples; ++k) {
        double y = th * k / samples;
        double b = barrier(y);
        if (b < best) {
            best = b;
            ybest = y;
        }
    }
    // refine the interior minimum (golden-section)
    double a = std::max(th / samples * 0.5, ybest - th / samples);
    double b = std::min(th * (1.0 - 0.5 / samples), ybest + th / samples);
    const double gr = 0.61803398874989485;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = barrier(x1), f2 = barrier(x2);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = barrier(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = barrier(x2);
        }
    }
    return std::min(best, std::min(f1, f2));
}

double embed_xhat(const DevelopingMap& dev, const CoeffPair& coeffs, bool* capped) {
    const auto& z = coeffs.zeros();
    if (capped) *capped = false;
    double lo = z.x_b_plus;
    double hi = std::min(dev.x_max(), coeffs.x_hi()) - 1e-6;
    if (sector_clearance(dev, lo) <= 0.0)
        throw std::runtime_error("embed_xhat: sector predicate fails already at x_b^+");
    if (sector_clearance(dev, hi) > 0.0) {
        if (capped) *capped = true;
        return hi;
    }
    return bisect([&](double x) { return sector_clearance(dev, x); }, lo, hi, 1e-12);
}

std::array<double, 2> embed_bounds(const DevelopingMap& dev, const CoeffPair& coeffs) {
    double xhat = embed_xhat(dev, coeffs);
    double h0 = -xhat;
    double h1 = s_star_inverse(coeffs, xhat);
    return {h0, h1};
}

ModuliPoint moduli_point(int n, double tau) {
    ModuliPoint mp;
    mp.n = n;
    mp.tau = tau;
    mp.eta = eta_level(n, tau);
    mp.vartheta = vartheta(mp.eta, tau);
    mp.theta_arc = theta_arc(mp.eta, tau);
    auto p = ModelParams::ring_raw(mp.eta, tau, n);
    auto coeffs = solve_coeffs(p);
    GridSpec tiny;
    tiny.nx = 2;
    tiny.ny = 2;
    tiny.x0 = 0;
    tiny.x1 = 1e-3;
    tiny.y0 = 0;
    tiny.y1 = 1e-3;
    auto dev = developing_map(p, coeffs, tiny, true);
    auto hb = embed_bounds(dev, coeffs);
    mp.h0 = hb[0];
    mp.h1 = hb[1];
    mp.s_star_of_h1 = s_star(coeffs, mp.h1);
    return mp;
}

double psi1(const CoeffPair& coeffs, double s) {
    double q = 1.0 / (2.0 * coeffs.t(s));
    double ss = s_star(coeffs, s);
    return 4.0 * q * (1.0 / coeffs.alpha(s) + 1.0 / coeffs.alpha(ss));
}

double psi2(const ModelParams& p, const CoeffPair& coeffs, double s) {
    double q = 1.0 / (2.0 * coeffs.t(s));
    double ss = s_star(coeffs, s);
    double k1 = coeffs.kappa1();
    double chat = p.c_hat0();
    auto a_of = [&](double x) {
        return -(4.0 * q / k1) * coeffs.int_alphabeta(x) +
               (4.0 * q / k1) * coeffs.beta(x) * (chat + coeffs.int_alpha2(x)) /
                   coeffs.alpha(x);
    };
    return a_of(s) - a_of(ss);
}

namespace {

// tau = 1 seed of Upsilon_1: the unique s < 0 with s*(s) = s_flat(s), where
// s_flat matches the product alpha*beta across its maximum. The usable
// x-range at tau = 1 is limited (the numerical orbit eventually leaves the
// separatrix), so brackets are grown defensively inside it.
double upsilon1_seed(const ModelParams& p, const CoeffPair& coeffs) {
    (void)p;
    double span = std::min(-coeffs.x_lo(), coeffs.x_hi()) - 1.0;
    auto rho = [&](double x) { return coeffs.alpha(x) * coeffs.beta(x); };
    auto rho_p = [&](double x) {
        return coeffs.alpha_prime(x) * coeffs.beta(x) + coeffs.alpha(x) * coeffs.beta_prime(x);
    };
    double X = 2.0;
    while (rho_p(X) > 0 && X < span) X = std::min(span, X + 1.0);
    double xm = bisect(rho_p, 1e-6, X, 1e-12);
    auto s_flat = [&](double s) -> double {
        double v = rho(s);
        double B = std::min(xm + 2.0, span);
        while (rho(B) > v && B < span - 1e-9) B = std::min(span, B + 1.0);
        if (rho(B) > v) throw std::runtime_error("s_flat bracket exhausted");
        return bisect([&](double x) { return rho(x) - v; }, xm, B, 1e-12);
    };
    auto G = [&](double s) { return s_star(coeffs, s) - s_flat(s); };
    double prev_s = -0.1, prev_g = G(prev_s);
    for (double s = -0.3; s > -span; s -= 0.2) {
        double g;
        try {
            g = G(s);
        } catch (const std::exception&) {
            break; // s_flat left the usable range: no crossing further out
        }
        if (prev_g * g <= 0.0) return bisect(G, s, prev_s, 1e-12);
        prev_s = s;
        prev_g = g;
    }
    throw std::runtime_error("Upsilon_1 seed not bracketed on the tau = 1 edge");
}

} // namespace

BifurcationCurves bifurcation_loci(int n, const std::vector<double>& tau_grid) {
    BifurcationCurves out;
    std::ostringstream diag;
    // seeds on the tau = 1 edge
    auto p1 = ModelParams::ring_raw(eta_level(n, 1.0), 1.0, n);
    auto c1 = solve_coeffs(p1, 24.0);
    out.seed1 = upsilon1_seed(p1, c1);
    // Psi2 sign change on the tau = 1 edge
    {
        double span = std::min(-c1.x_lo(), c1.x_hi()) - 1.0;
        double prev_s = -span + 0.5, prev_v = psi2(p1, c1, prev_s);
        bool found = false;
        for (double s = prev_s; s < -0.05; s += 0.05) {
            double v = psi2(p1, c1, s);
            if (prev_v * v < 0) {
                out.seed2 = bisect([&](double t) { return psi2(p1, c1, t); }, prev_s, s, 1e-12);
                found = true;
                break;
            }
            prev_s = s;
            prev_v = v;
        }
        if (!found) diag << "no Psi2 sign change on tau=1 edge; ";
    }

    auto trace = [&](bool first) -> std::vector<std::array<double, 2>> {
        std::vector<std::array<double, 2>> curve;
        double s_prev = first ? out.seed1 : out.seed2;
        curve.push_back({s_prev, 1.0});
        std::vector<double> taus = tau_grid;
        std::sort(taus.begin(), taus.end(), std::greater<double>());
        for (double tau : taus) {
            if (tau >= 1.0 || tau <= 0.0) continue;
            auto p = ModelParams::ring_raw(eta_level(n, tau), tau, n);
            auto cp = solve_coeffs(p);
            auto F = [&](double s) { return first ? psi1(cp, s) : psi2(p, cp, s); };
            double lo_lim = std::max(cp.zeros().x_b_minus, cp.x_lo()) + 1e-6;
            double ds = 0.05 * (1.0 + std::abs(s_prev));
            double a = std::max(lo_lim, s_prev - ds), b = std::min(-1e-9, s_prev + ds);
            double fa = F(a), fb = F(b);
            int grow = 0;
            while (fa * fb > 0 && grow++ < 12) {
                a = std::max(lo_lim, a - ds);
                b = std::min(-1e-9, b + ds);
                fa = F(a);
                fb = F(b);
            }
            if (fa * fb > 0) {
                diag << (first ? "Upsilon1" : "Upsilon2") << " lost at tau=" << tau << "; ";
                break;
            }
            double s = bisect(F, a, b, 1e-12);
            curve.push_back({s, tau});
            s_prev = s;
        }
        return curve;
    };
    out.upsilon1 = trace(true);
    out.upsilon2 = trace(false);
    out.diagnostics = diag.str();
    return out;
}

} // namespace serrin
