#pragma once

#include "serrin/types.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace serrin {

/// Thrown when an argument falls inside the pole-exclusion radius of a
/// lattice point.
struct PoleError : std::domain_error {
    Complex nearest_lattice_point;
    explicit PoleError(Complex nearest)
        : std::domain_error("argument within pole-exclusion radius of lattice point"),
          nearest_lattice_point(nearest) {}
};

struct UnsupportedLatticeError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Weierstrass elliptic functions on a rectangular lattice with real
/// invariants g2, g3 and positive modular discriminant g2^3 - 27 g3^2.
///
/// Evaluation is by Jacobi theta series after reduction to the fundamental
/// cell. When the cell is wider than tall, functions are evaluated through
/// the 90-degree rotated lattice (invariants (g2, -g3)) so that the nome
/// never exceeds e^{-pi}; four or five theta terms then reach double
/// precision. Degenerate lattices (double root, discriminant zero) are
/// represented explicitly and evaluated by hyperbolic/trigonometric closed
/// forms.
class Weierstrass {
  public:
    /// Construct from real invariants. Requires g2^3 - 27 g3^2 >= 0.
    Weierstrass(double g2, double g3);

    /// Construct from the three real roots of 4t^3 - g2 t - g3 (any order,
    /// sum must vanish to tolerance). A double root yields a degenerate
    /// lattice with one infinite half-period, reported via degenerate().
    static Weierstrass from_roots(double e1, double e2, double e3);

    double g2() const { return g2_; }
    double g3() const { return g3_; }
    /// Roots sorted e1 >= e2 >= e3; P(omega1) = e1, P(omega2) = e3.
    double e1() const { return e1_; }
    double e2() const { return e2_; }
    double e3() const { return e3_; }
    double discriminant() const { return g2_ * g2_ * g2_ - 27.0 * g3_ * g3_; }

    /// Real half-period (infinite for a degenerate lattice with e1 == e2).
    double omega1() const { return om1_; }
    /// Purely imaginary half-period (infinite imaginary part when e2 == e3).
    Complex omega2() const { return {0.0, om2_}; }

    bool degenerate() const { return degenerate_; }

    Complex P(Complex z) const;
    Complex Pprime(Complex z) const;
    std::array<Complex, 2> P_and_Pprime(Complex z) const;
    Complex zeta(Complex z) const;
    Complex sigma(Complex z) const;
    /// A branch of log sigma(z); differences of two values are exact up to
    /// multiples of 2*pi*i, so exp(log_sigma(a) - log_sigma(b)) is the exact
    /// ratio sigma(a)/sigma(b) without overflow of the factors.
    Complex log_sigma(Complex z) const;

    /// zeta(omega1) and zeta(omega2).
    Complex eta1() const { return eta1_; }
    Complex eta2() const { return eta2_; }

    /// Pole-exclusion radius in lattice units (fraction of the shortest
    /// period). Arguments closer than this to a lattice point raise
    /// PoleError from P, Pprime and zeta.
    static constexpr double pole_exclusion = 1e-6;

  private:
    Weierstrass() = default;

    void setup_from_roots();
    void setup_theta();

    // Evaluation on the canonical (tall-cell) lattice, z already reduced.
    Complex P_core(Complex z) const;
    Complex Pprime_core(Complex z) const;
    Complex zeta_core(Complex z) const;
    Complex log_sigma_core(Complex z) const;

    // Reduce z modulo the period lattice to the centered fundamental cell;
    // returns reduced point and the integer shifts taken out.
    Complex reduce(Complex z, long& m, long& n) const;
    void pole_check(Complex z, Complex z_reduced) const;

    double g2_ = 0, g3_ = 0;
    double e1_ = 0, e2_ = 0, e3_ = 0;
    double om1_ = 0;  // real half-period
    double om2_ = 0;  // imaginary part of omega2
    Complex eta1_{0, 0}, eta2_{0, 0};
    bool degenerate_ = false;
    bool rotated_ = false; // evaluate through the (g2,-g3) lattice

    // canonical evaluation lattice (after optional rotation)
    double a1_ = 0;   // real half-period of evaluation lattice
    double a2_ = 0;   // imaginary part of its second half-period
    double q_ = 0;    // real nome exp(-pi a2/a1), <= exp(-pi)
    double ce1_ = 0;  // e1 of evaluation lattice
    double ceta1_ = 0; // eta1 of evaluation lattice (real)
    // theta null values and factors
    double th2_0_ = 0, th3_0_ = 0, th4_0_ = 0, th1p_0_ = 0;
    double pfac_ = 0;     // (pi*th3*th4/(2 a1))^2
    double zeta_add_ = 0; // ceta1/a1
};

/// Complete elliptic integral of the first kind, parameter m = k^2,
/// by the arithmetic-geometric mean.
double elliptic_K(double m);

} // namespace serrin
