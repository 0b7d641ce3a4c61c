#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace serrin {

/// Truncated Taylor series (coefficients f^(k)/k!) used to propagate exact
/// derivatives of the closed-form developing maps through arithmetic.
class Jet {
  public:
    using C = std::complex<double>;

    Jet() = default;
    Jet(int order, C c0) : c_(order + 1, C(0, 0)) { c_[0] = c0; }
    static Jet constant(int order, C v) { return Jet(order, v); }
    /// the series of (z - z0) itself
    static Jet variable(int order, C z0) {
        Jet j(order, z0);
        if (order >= 1) j.c_[1] = C(1, 0);
        return j;
    }

    int order() const { return int(c_.size()) - 1; }
    C& operator[](int k) { return c_[k]; }
    const C& operator[](int k) const { return c_[k]; }

    /// k-th derivative value: k! * c[k]
    C deriv(int k) const {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return c_[k] * f;
    }
    std::vector<C> derivatives() const {
        std::vector<C> d(c_.size());
        for (int k = 0; k <= order(); ++k) d[k] = deriv(k);
        return d;
    }

    Jet operator+(const Jet& o) const {
        Jet r = *this;
        for (int k = 0; k <= order(); ++k) r.c_[k] += o.c_[k];
        return r;
    }
    Jet operator-(const Jet& o) const {
        Jet r = *this;
        for (int k = 0; k <= order(); ++k) r.c_[k] -= o.c_[k];
        return r;
    }
    Jet operator*(const Jet& o) const {
        Jet r(order(), C(0, 0));
        for (int k = 0; k <= order(); ++k)
            for (int j = 0; j <= k; ++j) r.c_[k] += c_[j] * o.c_[k - j];
        return r;
    }
    Jet operator*(C s) const {
        Jet r = *this;
        for (auto& v : r.c_) v *= s;
        return r;
    }
    Jet operator+(C s) const {
        Jet r = *this;
        r.c_[0] += s;
        return r;
    }
    Jet operator/(const Jet& o) const {
        if (std::abs(o.c_[0]) == 0.0) throw std::domain_error("jet division by zero constant term");
        Jet r(order(), C(0, 0));
        for (int k = 0; k <= order(); ++k) {
            C acc = c_[k];
            for (int j = 0; j < k; ++j) acc -= r.c_[j] * o.c_[k - j];
            r.c_[k] = acc / o.c_[0];
        }
        return r;
    }
    /// series of f' (one order shorter; kept same length, top coefficient 0)
    Jet derivative() const {
        Jet r(order(), C(0, 0));
        for (int k = 0; k + 1 <= order(); ++k) r.c_[k] = c_[k + 1] * double(k + 1);
        return r;
    }

    /// Taylor series of the Weierstrass P function at z0 from the values
    /// (P, P') there, via P'' = 6 P^2 - g2/2 applied to the series.
    static Jet weierstrass_p(int order, C p0, C p1, double g2) {
        Jet p(order, p0);
        if (order >= 1) p.c_[1] = p1;
        for (int k = 0; k + 2 <= order; ++k) {
            C sq(0, 0); // (p^2)_k using coefficients up to k (valid: needs c_0..c_k)
            for (int j = 0; j <= k; ++j) sq += p.c_[j] * p.c_[k - j];
            C rhs = 6.0 * sq - (k == 0 ? C(g2 / 2.0, 0) : C(0, 0));
            p.c_[k + 2] = rhs / double((k + 1) * (k + 2));
        }
        return p;
    }

    /// Taylor series of tan(s z + w0) at the point where tan = t0.
    static Jet tangent(int order, C t0, double s) {
        Jet t(order, t0);
        for (int k = 0; k + 1 <= order; ++k) {
            C sq(0, 0);
            for (int j = 0; j <= k; ++j) sq += t.c_[j] * t.c_[k - j];
            C rhs = s * ((k == 0 ? C(1, 0) : C(0, 0)) + sq);
            t.c_[k + 1] = rhs / double(k + 1);
        }
        return t;
    }

  private:
    std::vector<C> c_;
};

} // namespace serrin
