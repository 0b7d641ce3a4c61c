#pragma once

#include "serrin/coeffs.hpp"
#include "serrin/grid.hpp"
#include "serrin/jet.hpp"
#include "serrin/types.hpp"
#include "serrin/weierstrass.hpp"

#include <Eigen/Core>
#include <memory>
#include <optional>

namespace serrin {

/// Developing map of a periodic Serrin band: g(z) = i(-4 zeta(z + omega1)
/// + (tau + 1/tau) z / 3 + 4 zeta(omega1)) on (-omega1, omega1) x R, with
/// translational quasi-periodicity in y. tau = 1 degenerates to the flat
/// map g = i z.
class BandMap {
  public:
    double tau() const { return tau_; }
    bool flat() const { return flat_; }
    double vartheta() const { return vartheta_; }
    double x_max() const { return x_max_; } // = omega1 (= x_a^+)
    Complex period_shift() const { return shift_; } // g(0, 2 vartheta)

    Complex g(Complex z) const;
    Complex gprime(Complex z) const;
    Jet eta_jet(Complex z, int order) const;

    const Weierstrass& lattice() const { return *wp_; }

    GridSpec grid;
    Eigen::MatrixXcd G, Gp;

  private:
    friend BandMap band_map(double, std::optional<GridSpec>);
    bool flat_ = false;
    double tau_ = 1;
    double vartheta_ = 0, x_max_ = 0, lin_ = 0; // lin = (tau+1/tau)/3
    Complex shift_{0, 0};
    std::shared_ptr<const Weierstrass> wp_;
};

BandMap band_map(double tau, std::optional<GridSpec> grid = std::nullopt);

/// The unique positive solution of x = coth(x).
double x_sharp();

/// Periodic Serrin band solution on [-x*, x*] x one period.
struct BandSolution {
    double tau = 1;
    double x_star = 0;
    double vartheta = 0;
    double b_boundary = 0;       // Neumann constant b(x*) < 0
    double q_hopf = -0.5;
    Complex period_shift{0, 0};
    GridSpec grid;
    Eigen::MatrixXcd G, Gp;
    Eigen::MatrixXd omega, L, v;

    double a_of(double x) const;
    double b_of(double x) const { return -2.0 / coeffs->alpha(x); }
    double f_of(double x) const { return coeffs->h(x) / coeffs->alpha(x); }
    double h_of(double x) const { return coeffs->h(x); }

    std::shared_ptr<const CoeffPair> coeffs;
    std::shared_ptr<const BandMap> map;
    double a_const = 0; // additive constant of a(x), fixed by a(x*) = 0

    /// boundary polyline x = +x* (or -x*) over `periods` periods
    std::vector<Complex> boundary_curve(bool upper, int samples = 4096,
                                        int periods = 1) const;
};

BandSolution band_solution(double tau, const BandMap& map,
                           std::optional<GridSpec> grid_override = std::nullopt);

/// Rescaled tau -> 0 asymptotics: x*/sqrt(tau) against pi/2, the Hausdorff
/// distance of the rescaled fundamental boundary piece from the radius-2
/// disk boundary, and the sup gap of sqrt(tau) g'(sqrt(tau) z) from the
/// disk-chain closed form 2i/(1 + cos z).
struct BandLimitReport {
    double tau = 0;
    double x_star_scaled = 0;     // x*/sqrt(tau)
    double x_star_gap = 0;        // |x*/sqrt(tau) - pi/2|
    double hausdorff_to_disk = 0; // boundary piece vs circle of radius 2
    double gprime_gap = 0;
};

BandLimitReport band_limits(double tau);

struct BandEmbeddedReport {
    bool embedded = false;
    int critical_points = 0; // of Im g(x* + iy) per period (expect 2)
    bool separated = false;  // components in opposite half-planes
    bool graphs = false;     // Re g strictly monotone along each component
};

BandEmbeddedReport band_embedded_check(const BandSolution& sol);

} // namespace serrin
