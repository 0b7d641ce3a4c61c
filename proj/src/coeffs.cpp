#include "serrin/coeffs.hpp"

#include <cmath>
#include <memory>

namespace serrin {

double bisect(const std::function<double(double)>& f, double a, double b, double xtol,
              int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0) return a;
    if (fb == 0) return b;
    if (fa * fb > 0) throw std::runtime_error("bisect: no sign change in bracket");
    for (int i = 0; i < max_iter && std::abs(b - a) > xtol; ++i) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if (fm == 0) return m;
        if (fa * fm < 0) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

void ModelParams::validate() const {
    if (!(eta > 0)) throw std::domain_error("eta must be positive");
    if (!(tau > 0) || tau > 1.0) throw std::domain_error("tau must lie in (0, 1]");
    if (kind == DomainKind::ring && n < 2) throw std::domain_error("ring requires n >= 2");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Locate a zero of component `comp` of the interpolant on [xa, xb] by
// sampling then bisection.
template <int N>
std::optional<double> find_zero(const HermiteInterp<N>& interp, int comp, double xa, double xb,
                                double skip_below_abs = 0.0) {
    const int samples = 512;
    double prev_x = xa;
    double prev_v = interp(xa)[comp];
    for (int i = 1; i <= samples; ++i) {
        double x = xa + (xb - xa) * double(i) / samples;
        double v = interp(x)[comp];
        if (std::abs(x) > skip_below_abs && prev_v * v <= 0.0 && (prev_v != 0.0 || v != 0.0)) {
            auto f = [&](double t) { return interp(t)[comp]; };
            return bisect(f, prev_x, x, 1e-13);
        }
        prev_x = x;
        prev_v = v;
    }
    return std::nullopt;
}

} // namespace

double CoeffPair::alpha(double x) const {
    return kind_ == DomainKind::ring ? ring_(x)[0] : band_(x)[0];
}
double CoeffPair::alpha_prime(double x) const {
    return kind_ == DomainKind::ring ? ring_(x)[1] : band_(x)[1];
}
double CoeffPair::beta(double x) const {
    return kind_ == DomainKind::ring ? ring_(x)[2] : -band_(x)[0];
}
double CoeffPair::beta_prime(double x) const {
    return kind_ == DomainKind::ring ? ring_(x)[3] : -band_(x)[1];
}
double CoeffPair::int_alpha2(double x) const {
    return kind_ == DomainKind::ring ? ring_(x)[4] : band_(x)[2];
}
double CoeffPair::int_alphabeta(double x) const {
    return kind_ == DomainKind::ring ? ring_(x)[5] : -band_(x)[2];
}
double CoeffPair::h(double x) const {
    if (kind_ != DomainKind::band) throw std::logic_error("h is a band-only function");
    return band_(x)[3];
}
double CoeffPair::h_prime(double x) const {
    if (kind_ != DomainKind::band) throw std::logic_error("h is a band-only function");
    return band_(x)[4];
}
double CoeffPair::x_lo() const {
    return kind_ == DomainKind::ring ? ring_.x_min() : band_.x_min();
}
double CoeffPair::x_hi() const {
    return kind_ == DomainKind::ring ? ring_.x_max() : band_.x_max();
}

CoeffPair solve_coeffs(const ModelParams& p, double x_span) {
    p.validate();
    CoeffPair cp;
    cp.kind_ = p.kind;
    cp.delta_ = p.delta();
    const double delta = cp.delta_;

    if (p.kind == DomainKind::ring) {
        using DP = DormandPrince<6>;
        using V6 = DP::Vec;
        auto rhs = [delta](double, const V6& y) {
            V6 d;
            d << y[1], delta * y[0] - 2.0 * y[0] * y[0] * y[2], y[3],
                delta * y[2] - 2.0 * y[0] * y[2] * y[2], y[0] * y[0], y[0] * y[2];
            return d;
        };
        auto d2 = [delta](double, const V6& y) {
            V6 d;
            double app = delta * y[0] - 2.0 * y[0] * y[0] * y[2];
            double bpp = delta * y[2] - 2.0 * y[0] * y[2] * y[2];
            d << app, delta * y[1] - 2.0 * (2.0 * y[0] * y[1] * y[2] + y[0] * y[0] * y[3]), bpp,
                delta * y[3] - 2.0 * (y[1] * y[2] * y[2] + 2.0 * y[0] * y[2] * y[3]),
                2.0 * y[0] * y[1], y[1] * y[2] + y[0] * y[3];
            return d;
        };
        DP::Options opt;
        opt.h_max = 0.04;
        opt.abs_tol = 1e-13;
        opt.rel_tol = 1e-12;
        DP dp(rhs, opt);
        dp.set_deriv2(d2);
        V6 y0;
        y0 << 0.0, p.eta * p.tau * p.tau / 8.0, 2.0,
            (p.eta * p.eta * p.tau * p.tau + p.eta * p.eta - 1.0) / (2.0 * p.eta), 0.0, 0.0;

        // stop once alpha has changed sign and we are one unit past it
        auto make_stop = [] {
            auto seen = std::make_shared<double>(kInf);
            return [seen](double x, const DP::Vec& y) {
                if (std::abs(x) > 1e-6 && y[0] * (x > 0 ? 1.0 : -1.0) < 0.0 && std::isinf(*seen))
                    *seen = std::abs(x);
                return std::abs(x) > *seen + 1.0;
            };
        };
        auto fwd = dp.integrate(0.0, y0, x_span, make_stop());
        auto bwd = dp.integrate(0.0, y0, -x_span, make_stop());

        std::vector<DP::Node> nodes(bwd.nodes.rbegin(), bwd.nodes.rend());
        nodes.insert(nodes.end(), fwd.nodes.begin() + 1, fwd.nodes.end());
        cp.ring_ = HermiteInterp<6>(std::move(nodes));

        const auto& itp = cp.ring_;
        auto xbp = find_zero(itp, 2, 0.0, itp.x_max());
        auto xbm = find_zero(itp, 2, 0.0, itp.x_min());
        auto xap = xbp ? find_zero(itp, 0, *xbp, itp.x_max()) : std::nullopt;
        auto xam = xbm ? find_zero(itp, 0, *xbm, itp.x_min()) : std::nullopt;
        if (!xbp) throw HorizonError(itp.x_max()); // x_b^+ always finite
        const double min_span = 12.0;
        if (!xap && !fwd.reached && !fwd.stopped && itp.x_max() < min_span)
            throw HorizonError(itp.x_max());
        if (!xam && !bwd.reached && !bwd.stopped && itp.x_min() > -min_span)
            throw HorizonError(itp.x_min());
        cp.zeros_ = CoeffZeros{xam.value_or(-kInf), xbm.value_or(-kInf), *xbp,
                               xap.value_or(kInf)};

        cp.kappa1_ = p.kappa1();
        V6 yv0 = itp(0.0);
        cp.kappa2_ = yv0[1] * yv0[3] - delta * yv0[0] * yv0[2] +
                     yv0[0] * yv0[0] * yv0[2] * yv0[2];
        double drift = 0;
        for (int i = 0; i <= 100; ++i) {
            double x = itp.x_min() + (itp.x_max() - itp.x_min()) * i / 100.0;
            V6 y = itp(x);
            double k1 = y[1] * y[2] - y[3] * y[0];
            double k2 = y[1] * y[3] - delta * y[0] * y[2] + y[0] * y[0] * y[2] * y[2];
            drift = std::max(drift, std::abs(k1 - cp.kappa1_) / std::max(1.0, std::abs(cp.kappa1_)));
            drift = std::max(drift, std::abs(k2 - cp.kappa2_) / std::max(1.0, std::abs(cp.kappa2_)));
        }
        cp.drift_ = drift;
        return cp;
    }

    // band: state (alpha, alpha', A, h, h')
    using DP = DormandPrince<5>;
    using V5 = DP::Vec;
    auto rhs = [delta](double, const V5& y) {
        V5 d;
        d << y[1], delta * y[0] + 2.0 * y[0] * y[0] * y[0], y[0] * y[0],
            y[4], (delta + 2.0 * y[0] * y[0]) * y[3];
        return d;
    };
    auto d2 = [delta](double, const V5& y) {
        V5 d;
        double app = delta * y[0] + 2.0 * y[0] * y[0] * y[0];
        d << app, (delta + 6.0 * y[0] * y[0]) * y[1], 2.0 * y[0] * y[1],
            (delta + 2.0 * y[0] * y[0]) * y[3],
            4.0 * y[0] * y[1] * y[3] + (delta + 2.0 * y[0] * y[0]) * y[4];
        return d;
    };
    DP::Options opt;
    opt.h_max = 0.04;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-12;
    DP dp(rhs, opt);
    dp.set_deriv2(d2);
    V5 y0;
    y0 << 0.0, 1.0, 0.0, 2.0, 0.0;
    auto make_stop = [] {
        auto seen = std::make_shared<double>(kInf);
        return [seen](double x, const V5& y) {
            if (std::abs(x) > 1e-6 && y[0] * (x > 0 ? 1.0 : -1.0) < 0.0 && std::isinf(*seen))
                *seen = std::abs(x);
            return std::abs(x) > *seen + 0.5;
        };
    };
    auto fwd = dp.integrate(0.0, y0, x_span, make_stop());
    auto bwd = dp.integrate(0.0, y0, -x_span, make_stop());
    std::vector<DP::Node> nodes(bwd.nodes.rbegin(), bwd.nodes.rend());
    nodes.insert(nodes.end(), fwd.nodes.begin() + 1, fwd.nodes.end());
    cp.band_ = HermiteInterp<5>(std::move(nodes));

    const auto& itp = cp.band_;
    auto xap = find_zero(itp, 0, 1e-9, itp.x_max());
    if (!xap && !fwd.reached && !fwd.stopped && itp.x_max() < 12.0)
        throw HorizonError(itp.x_max());
    cp.zeros_ = CoeffZeros{xap ? -*xap : -kInf, 0.0, 0.0, xap.value_or(kInf)};
    cp.kappa1_ = 0.0; // band: alpha' beta - beta' alpha vanishes identically
    {
        V5 yv0 = itp(0.0);
        cp.kappa2_ = -yv0[1] * yv0[1] - delta * (-yv0[0] * yv0[0]) +
                     yv0[0] * yv0[0] * yv0[0] * yv0[0];
        double drift = 0;
        for (int i = 0; i <= 100; ++i) {
            double x = itp.x_min() + (itp.x_max() - itp.x_min()) * i / 100.0;
            V5 y = itp(x);
            double k2 = -y[1] * y[1] + delta * y[0] * y[0] + std::pow(y[0], 4);
            drift = std::max(drift, std::abs(k2 - cp.kappa2_) / std::max(1.0, std::abs(cp.kappa2_)));
        }
        cp.drift_ = drift;
    }
    return cp;
}

BoundaryProfile boundary_profile(const ModelParams& p) {
    p.validate();
    BoundaryProfile bp;
    const bool ring = p.kind == DomainKind::ring;
    if (p.tau == 1.0) {
        bp.constant_ = true;
        bp.zmin_ = bp.zmax_ = ring ? 2.0 / p.eta : 1.0;
        bp.vartheta_ = ring ? 2.0 * 3.14159265358979323846 / std::sqrt(1.0 + p.eta * p.eta)
                            : 3.14159265358979323846;
        return bp;
    }
    // roots of the profile polynomial and the ODE 2nd-order form
    double r1, r2, r3, lead;
    if (ring) {
        lead = -p.eta * p.tau * p.tau / 2.0;
        r1 = 2.0 / (p.eta * p.tau * p.tau);
        r2 = 2.0 / p.eta;
        r3 = -2.0 * p.eta;
    } else {
        lead = -1.0;
        r1 = 1.0 / p.tau;
        r2 = p.tau;
        r3 = 0.0;
    }
    auto pprime = [&](double z) {
        return lead * ((z - r2) * (z - r3) + (z - r1) * (z - r3) + (z - r1) * (z - r2));
    };
    auto psecond = [&](double z) { return lead * 2.0 * ((z - r1) + (z - r2) + (z - r3)); };
    const double scale = ring ? 8.0 : 2.0; // scale * z'' = p'(z)
    using DP = DormandPrince<2>;
    using V2 = DP::Vec;
    auto rhs = [&](double, const V2& y) {
        V2 d;
        d << y[1], pprime(y[0]) / scale;
        return d;
    };
    DP::Options opt;
    opt.h_max = 0.05;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-12;
    DP dp(rhs, opt);
    dp.set_deriv2([&](double, const V2& y) {
        V2 d;
        d << pprime(y[0]) / scale, psecond(y[0]) * y[1] / scale;
        return d;
    });
    V2 y0;
    y0 << r2, 0.0;
    // integrate until z' returns to zero at the upper root
    double guess = 100.0;
    auto run = dp.integrate(0.0, y0, guess, [&](double y_, const V2& v) {
        (void)y_;
        return v[0] > 0.5 * (r1 + r2) && v[1] < -1e-14;
    });
    HermiteInterp<2> itp(std::move(run.nodes));
    auto top = find_zero(itp, 1, itp.x_min() + 1e-9, itp.x_max());
    if (!top) throw std::runtime_error("boundary profile: half-period not bracketed");
    bp.vartheta_ = *top;
    bp.zmin_ = r2;
    bp.zmax_ = itp(*top)[0];
    bp.half_ = std::move(itp);
    return bp;
}

double BoundaryProfile::operator()(double y) const {
    if (constant_) return zmin_;
    double T = 2.0 * vartheta_;
    double u = std::fmod(y, T);
    if (u < 0) u += T;
    if (u > vartheta_) u = T - u;
    return half_(u)[0];
}

double BoundaryProfile::deriv(double y) const {
    if (constant_) return 0.0;
    double T = 2.0 * vartheta_;
    double u = std::fmod(y, T);
    if (u < 0) u += T;
    double sign = 1.0;
    if (u > vartheta_) {
        u = T - u;
        sign = -1.0;
    }
    return sign * half_(u)[1];
}

} // namespace serrin
