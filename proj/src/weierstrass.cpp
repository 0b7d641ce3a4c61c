#include "serrin/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace serrin {

namespace {

// Jacobi theta series. q is real in (0, e^{-pi}] here, so very few terms are
// needed; the loops break once a term cannot contribute relative to the
// leading one (the bound also prevents overflow of sin/cos factors on
// elongated cells).
struct Theta {
    Complex v;
    double q, logq, aim; // aim = |Im v|
    int maxk;

    Theta(Complex v_, double q_) : v(v_), q(q_), logq(std::log(q_)), aim(std::abs(v_.imag())) {
        maxk = 2;
        // term_k magnitude bound: exp(logq*(k+1/2)^2 + (2k+1)*aim), leading k=0
        double lead = 0.25 * logq + aim;
        while (maxk < 40 &&
               logq * (maxk + 0.5) * (maxk + 0.5) + (2.0 * maxk + 1.0) * aim > lead - 46.0)
            ++maxk;
    }

    Complex t1() const {
        Complex s{0, 0};
        double sign = 1.0;
        for (int k = 0; k <= maxk; ++k) {
            double lq = logq * (k + 0.5) * (k + 0.5);
            s += sign * std::exp(lq) * std::sin(double(2 * k + 1) * v);
            sign = -sign;
        }
        return 2.0 * s;
    }
    Complex t1p() const {
        Complex s{0, 0};
        double sign = 1.0;
        for (int k = 0; k <= maxk; ++k) {
            double lq = logq * (k + 0.5) * (k + 0.5);
            s += sign * std::exp(lq) * double(2 * k + 1) * std::cos(double(2 * k + 1) * v);
            sign = -sign;
        }
        return 2.0 * s;
    }
    Complex t2() const {
        Complex s{0, 0};
        for (int k = 0; k <= maxk; ++k) {
            double lq = logq * (k + 0.5) * (k + 0.5);
            s += std::exp(lq) * std::cos(double(2 * k + 1) * v);
        }
        return 2.0 * s;
    }
    Complex t2p() const {
        Complex s{0, 0};
        for (int k = 0; k <= maxk; ++k) {
            double lq = logq * (k + 0.5) * (k + 0.5);
            s -= std::exp(lq) * double(2 * k + 1) * std::sin(double(2 * k + 1) * v);
        }
        return 2.0 * s;
    }
};

void solve_cubic_roots(double g2, double g3, double& r1, double& r2, double& r3) {
    // 4t^3 - g2 t - g3 = 0 with all roots real; trigonometric method.
    double p = -g2 / 4.0, q = -g3 / 4.0;
    if (std::abs(p) < 1e-300) {
        double r = std::cbrt(-q);
        r1 = r2 = r3 = r;
    } else {
        double A = 2.0 * std::sqrt(std::max(0.0, -p / 3.0));
        double arg = (A > 0.0) ? 3.0 * q / (A * p) : 0.0;
        arg = std::clamp(arg, -1.0, 1.0);
        double phi = std::acos(arg) / 3.0;
        r1 = A * std::cos(phi);
        r2 = A * std::cos(phi - 2.0 * kPi / 3.0);
        r3 = A * std::cos(phi - 4.0 * kPi / 3.0);
    }
    if (r1 < r2) std::swap(r1, r2);
    if (r2 < r3) std::swap(r2, r3);
    if (r1 < r2) std::swap(r1, r2);
}

} // namespace

double elliptic_K(double m) {
    if (m >= 1.0) return std::numeric_limits<double>::infinity();
    double a = 1.0, g = std::sqrt(1.0 - m);
    for (int i = 0; i < 60 && std::abs(a - g) > 1e-17 * a; ++i) {
        double an = 0.5 * (a + g);
        g = std::sqrt(a * g);
        a = an;
    }
    return kPi / (2.0 * a);
}

Weierstrass::Weierstrass(double g2, double g3) : g2_(g2), g3_(g3) {
    if (!std::isfinite(g2) || !std::isfinite(g3))
        throw std::domain_error("non-finite invariants");
    if (discriminant() < -1e-10 * (std::pow(std::abs(g2), 3) + g3 * g3 + 1.0))
        throw UnsupportedLatticeError("negative modular discriminant: lattice not rectangular");
    solve_cubic_roots(g2_, g3_, e1_, e2_, e3_);
    setup_from_roots();
}

Weierstrass Weierstrass::from_roots(double e1, double e2, double e3) {
    if (!std::isfinite(e1) || !std::isfinite(e2) || !std::isfinite(e3))
        throw std::domain_error("non-finite roots");
    double scale = std::max({std::abs(e1), std::abs(e2), std::abs(e3), 1e-30});
    if (std::abs(e1 + e2 + e3) > 1e-9 * scale)
        throw std::domain_error("roots must be real and sum to zero");
    double r[3] = {e1, e2, e3};
    std::sort(r, r + 3, std::greater<double>());
    Weierstrass w;
    w.e1_ = r[0];
    w.e2_ = r[1];
    w.e3_ = r[2];
    w.g2_ = -4.0 * (r[0] * r[1] + r[0] * r[2] + r[1] * r[2]);
    w.g3_ = 4.0 * r[0] * r[1] * r[2];
    w.setup_from_roots();
    return w;
}

void Weierstrass::setup_from_roots() {
    double span = e1_ - e3_;
    if (span <= 0.0) { // triple root: not used by any construction here
        degenerate_ = true;
        om1_ = om2_ = std::numeric_limits<double>::infinity();
        return;
    }
    double rel = 1e-9 * std::max(1.0, std::abs(e1_) + std::abs(e3_));
    degenerate_ = (e1_ - e2_ < rel) || (e2_ - e3_ < rel);
    double m = (e2_ - e3_) / span;
    double c = std::sqrt(span);
    om1_ = elliptic_K(m) / c;
    om2_ = elliptic_K(1.0 - m) / c;
    if (degenerate_) {
        if (e1_ - e2_ < rel) { // hyperbolic: P = e1 + span/sinh^2(c z)
            om1_ = std::numeric_limits<double>::infinity();
            om2_ = kPi / (2.0 * c);
            eta1_ = Complex(std::numeric_limits<double>::infinity(), 0);
            eta2_ = Complex(0, -e1_ * om2_); // coth(c om2 i) term vanishes
        } else { // trigonometric: P = e3 + span/sin^2(c z)
            om1_ = kPi / (2.0 * c);
            om2_ = std::numeric_limits<double>::infinity();
            eta1_ = Complex(-e3_ * om1_, 0.0); // cot(c om1) = cot(pi/2) = 0
            eta2_ = Complex(0, std::numeric_limits<double>::infinity());
        }
        return;
    }
    rotated_ = om2_ < om1_;
    setup_theta();
    if (!rotated_) {
        eta1_ = Complex(ceta1_, 0.0);
    } else {
        // zeta(z) = i zeta~(i z); i*omega1 is a half-period of the rotated
        // lattice, where zeta~ equals its eta~2 = (eta~1 i a2 - i pi/2)/a1.
        Complex teta2 = (Complex(ceta1_, 0) * Complex(0, a2_) - Complex(0, kPi / 2.0)) / a1_;
        eta1_ = Complex(0, 1) * teta2;
    }
    eta2_ = (eta1_ * omega2() - Complex(0, kPi / 2.0)) / om1_; // Legendre
}

void Weierstrass::setup_theta() {
    // Evaluation lattice (a1, i a2) with a2 >= a1; rotation flips g3 and
    // negates/reverses the roots.
    double ee1;
    if (!rotated_) {
        a1_ = om1_;
        a2_ = om2_;
        ee1 = e1_;
    } else {
        a1_ = om2_;
        a2_ = om1_;
        ee1 = -e3_;
    }
    q_ = std::exp(-kPi * a2_ / a1_);
    ce1_ = ee1;
    double logq = std::log(q_);
    double t2 = 0, t3 = 0, t4 = 0, t1p = 0, t1ppp = 0;
    for (int k = 0; k < 10; ++k) {
        double odd = 2.0 * k + 1.0;
        double qp = std::exp(logq * (k + 0.5) * (k + 0.5));
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        t2 += qp;
        t1p += sign * qp * odd;
        t1ppp += sign * qp * odd * odd * odd;
        if (k >= 1) {
            double qk = std::exp(logq * k * k);
            t3 += qk;
            t4 += sign * qk; // sign = (-1)^k matches here
        }
    }
    t2 *= 2.0;
    t1p *= 2.0;
    t1ppp *= -2.0;
    t3 = 1.0 + 2.0 * t3;
    t4 = 1.0 + 2.0 * t4; // accumulated (-1)^k q^{k^2}, k>=1
    th2_0_ = t2;
    th3_0_ = t3;
    th4_0_ = t4;
    th1p_0_ = t1p;
    pfac_ = kPi * t3 * t4 / (2.0 * a1_);
    pfac_ *= pfac_;
    ceta1_ = -(kPi * kPi) / (12.0 * a1_) * (t1ppp / t1p);
    zeta_add_ = ceta1_ / a1_;
}

Complex Weierstrass::reduce(Complex z, long& m, long& n) const {
    m = std::lround(z.real() / (2.0 * om1_));
    n = std::lround(z.imag() / (2.0 * om2_));
    return z - Complex(2.0 * om1_ * double(m), 2.0 * om2_ * double(n));
}

void Weierstrass::pole_check(Complex z, Complex zr) const {
    double scale = 2.0 * std::min(om1_, om2_);
    if (!std::isfinite(scale) || scale <= 0) scale = 1.0;
    if (std::abs(zr) < pole_exclusion * scale) throw PoleError(z - zr);
}

// ---- canonical-lattice evaluations (argument reduced, cell tall) ----

Complex Weierstrass::P_core(Complex z) const {
    Theta th(kPi * z / (2.0 * a1_), q_);
    Complex t1 = th.t1(), t2 = th.t2();
    return ce1_ + pfac_ * (t2 * t2) / (t1 * t1);
}

Complex Weierstrass::Pprime_core(Complex z) const {
    Theta th(kPi * z / (2.0 * a1_), q_);
    Complex t1 = th.t1(), t2 = th.t2(), t1p = th.t1p(), t2p = th.t2p();
    return 2.0 * pfac_ * (kPi / (2.0 * a1_)) * t2 * (t2p * t1 - t2 * t1p) / (t1 * t1 * t1);
}

Complex Weierstrass::zeta_core(Complex z) const {
    Theta th(kPi * z / (2.0 * a1_), q_);
    return zeta_add_ * z + (kPi / (2.0 * a1_)) * th.t1p() / th.t1();
}

Complex Weierstrass::log_sigma_core(Complex z) const {
    Theta th(kPi * z / (2.0 * a1_), q_);
    return std::log(2.0 * a1_ / (kPi * th1p_0_)) + ceta1_ * z * z / (2.0 * a1_) +
           std::log(th.t1());
}

// ---- public API ----

Complex Weierstrass::P(Complex z) const {
    if (degenerate_) {
        double c2 = e1_ - e3_;
        double c = std::sqrt(c2);
        if (std::isinf(om1_)) {
            Complex s = std::sinh(c * z);
            if (std::abs(s) < pole_exclusion) throw PoleError(Complex(0, 0));
            return e1_ + c2 / (s * s);
        }
        Complex s = std::sin(c * z);
        if (std::abs(s) < pole_exclusion) throw PoleError(Complex(0, 0));
        return e3_ + c2 / (s * s);
    }
    long m, n;
    Complex zr = reduce(z, m, n);
    pole_check(z, zr);
    if (!rotated_) return P_core(zr);
    return -P_core(Complex(0, 1) * zr);
}

Complex Weierstrass::Pprime(Complex z) const {
    if (degenerate_) {
        double c2 = e1_ - e3_;
        double c = std::sqrt(c2);
        if (std::isinf(om1_)) {
            Complex s = std::sinh(c * z);
            if (std::abs(s) < pole_exclusion) throw PoleError(Complex(0, 0));
            return -2.0 * c2 * c * std::cosh(c * z) / (s * s * s);
        }
        Complex s = std::sin(c * z);
        if (std::abs(s) < pole_exclusion) throw PoleError(Complex(0, 0));
        return -2.0 * c2 * c * std::cos(c * z) / (s * s * s);
    }
    long m, n;
    Complex zr = reduce(z, m, n);
    pole_check(z, zr);
    if (!rotated_) return Pprime_core(zr);
    return Complex(0, -1) * Pprime_core(Complex(0, 1) * zr);
}

std::array<Complex, 2> Weierstrass::P_and_Pprime(Complex z) const { return {P(z), Pprime(z)}; }

Complex Weierstrass::zeta(Complex z) const {
    if (degenerate_) {
        double c2 = e1_ - e3_;
        double c = std::sqrt(c2);
        if (std::isinf(om1_)) {
            Complex s = std::sinh(c * z);
            if (std::abs(s) < pole_exclusion) throw PoleError(Complex(0, 0));
            return -e1_ * z + c * std::cosh(c * z) / s;
        }
        Complex s = std::sin(c * z);
        if (std::abs(s) < pole_exclusion) throw PoleError(Complex(0, 0));
        return -e3_ * z + c * std::cos(c * z) / s;
    }
    long m, n;
    Complex zr = reduce(z, m, n);
    pole_check(z, zr);
    Complex base = rotated_ ? Complex(0, 1) * zeta_core(Complex(0, 1) * zr) : zeta_core(zr);
    return base + 2.0 * double(m) * eta1_ + 2.0 * double(n) * eta2_;
}

Complex Weierstrass::log_sigma(Complex z) const {
    if (degenerate_) {
        double c2 = e1_ - e3_;
        double c = std::sqrt(c2);
        if (std::isinf(om1_))
            return -e1_ * z * z / 2.0 + std::log(std::sinh(c * z) / c);
        return -e3_ * z * z / 2.0 + std::log(std::sin(c * z) / c);
    }
    long m, n;
    Complex zr = reduce(z, m, n);
    Complex base = rotated_ ? log_sigma_core(Complex(0, 1) * zr) - Complex(0, kPi / 2.0)
                            : log_sigma_core(zr);
    Complex shift = 2.0 * double(m) * eta1_ + 2.0 * double(n) * eta2_;
    Complex corr = shift * (zr + Complex(om1_ * double(m), om2_ * double(n)));
    long par = ((m + n + m * n) % 2 + 2) % 2;
    return base + corr + Complex(0, kPi * double(par));
}

Complex Weierstrass::sigma(Complex z) const {
    if (std::abs(z) < 1e-14) return z;
    return std::exp(log_sigma(z));
}

} // namespace serrin
