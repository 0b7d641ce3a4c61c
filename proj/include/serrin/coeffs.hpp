#pragma once

#include "serrin/ode.hpp"

#include <limits>
#include <optional>

namespace serrin {

enum class DomainKind { ring, band };

/// Point of moduli space being constructed, with the derived constants of
/// the coefficient system.
struct ModelParams {
    DomainKind kind = DomainKind::ring;
    int n = 2;          // dihedral order parameter (ring only)
    double eta = 1.0;   // > 0
    double tau = 0.5;   // in (0, 1]
    double s = std::numeric_limits<double>::quiet_NaN(); // ring inner parameter, < 0
    double q_hopf = std::numeric_limits<double>::quiet_NaN(); // set once s is chosen (ring)

    double delta() const {
        if (kind == DomainKind::ring) return 0.25 * (eta * eta * tau * tau - tau * tau - 1.0);
        return -(tau + 1.0 / tau);
    }
    double kappa1() const { return kind == DomainKind::ring ? eta * tau * tau / 4.0 : 0.0; }
    double c_hat0() const { return -eta * tau * tau / 16.0; }

    static ModelParams ring_raw(double eta, double tau, int n = 0) {
        ModelParams p;
        p.kind = DomainKind::ring;
        p.n = n;
        p.eta = eta;
        p.tau = tau;
        return p;
    }
    static ModelParams band(double tau) {
        ModelParams p;
        p.kind = DomainKind::band;
        p.tau = tau;
        p.eta = 1.0;
        p.q_hopf = -0.5;
        return p;
    }
    void validate() const;
};

/// Zeros of the coefficient functions; infinities encode the tau = 1
/// degeneration where alpha vanishes only at x = 0.
struct CoeffZeros {
    double x_a_minus, x_b_minus, x_b_plus, x_a_plus;
};

/// Dense representation of the coefficient pair (alpha, beta) with first
/// integrals and located zeros.
///
/// Ring: alpha'' = delta alpha - 2 alpha^2 beta, beta'' = delta beta -
/// 2 alpha beta^2. Band: alpha'' = delta alpha + 2 alpha^3 and beta = -alpha
/// exactly. State also carries running integrals of alpha^2 and alpha*beta,
/// and for the band the solution of h'' = (delta + 2 alpha^2) h used by the
/// width root.
class CoeffPair {
  public:
    double alpha(double x) const;
    double alpha_prime(double x) const;
    double beta(double x) const;
    double beta_prime(double x) const;
    /// integral of alpha^2 from 0 to x
    double int_alpha2(double x) const;
    /// integral of alpha*beta from 0 to x
    double int_alphabeta(double x) const;
    /// t(x) = beta/alpha
    double t(double x) const { return beta(x) / alpha(x); }

    // band-only auxiliary solution h and h'
    double h(double x) const;
    double h_prime(double x) const;

    double kappa1() const { return kappa1_; }
    double kappa2() const { return kappa2_; }
    /// max relative drift of the first integrals over the computed interval
    double kappa_drift() const { return drift_; }
    const CoeffZeros& zeros() const { return zeros_; }
    DomainKind kind() const { return kind_; }
    double delta() const { return delta_; }
    /// computed x-interval
    double x_lo() const;
    double x_hi() const;

  private:
    friend CoeffPair solve_coeffs(const ModelParams&, double);
    DomainKind kind_;
    double delta_ = 0, kappa1_ = 0, kappa2_ = 0, drift_ = 0;
    CoeffZeros zeros_{};
    // ring state: (alpha, alpha', beta, beta', A=int alpha^2, B=int alpha beta)
    HermiteInterp<6> ring_;
    // band state: (alpha, alpha', A, h, h')
    HermiteInterp<5> band_;
};

/// Integrate the coefficient system over the maximal interval containing
/// all required zeros (or to |x| <= x_span when a zero is at infinity),
/// locate the zeros to 1e-12 and build dense interpolants.
CoeffPair solve_coeffs(const ModelParams& p, double x_span = 40.0);

/// Boundary profile at x = 0: the periodic solution z(y) of
/// 4 z'^2 = p(z) (ring) or Z_y^2 = p(Z) (band), together with its half
/// period. Constant when tau = 1.
class BoundaryProfile {
  public:
    double operator()(double y) const;
    double deriv(double y) const;
    double half_period() const { return vartheta_; }
    double z_min() const { return zmin_; }
    double z_max() const { return zmax_; }
    bool constant() const { return constant_; }

  private:
    friend BoundaryProfile boundary_profile(const ModelParams&);
    bool constant_ = false;
    double zmin_ = 0, zmax_ = 0, vartheta_ = 0;
    HermiteInterp<2> half_; // one monotone half-period [0, vartheta]
};

BoundaryProfile boundary_profile(const ModelParams& p);

} // namespace serrin
