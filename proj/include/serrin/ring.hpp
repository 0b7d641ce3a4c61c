#pragma once

#include "serrin/coeffs.hpp"
#include "serrin/grid.hpp"
#include "serrin/jet.hpp"
#include "serrin/omega.hpp"
#include "serrin/types.hpp"
#include "serrin/weierstrass.hpp"

#include <Eigen/Core>
#include <memory>
#include <optional>

namespace serrin {

struct LatticeConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InconsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularCoefficientError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Elliptic data behind a ring developing map.
struct WeierstrassData {
    double g2 = 0, g3 = 0;
    double e1 = 0, e2 = 0, e3 = 0;
    double omega1 = 0;
    Complex omega2{0, 0};
    Complex mu{0, 0};    // P(mu) = bc2/4 on the segment [omega2, omega1+omega2]
    double c_cubed = 0;  // -eta tau^2 / 8
    double bc2 = 0;      // delta / 3
    Complex g0{0, 0};    // normalization so that g(0) = -1
};

enum class MapMode { closed_form, ode_fallback, radial, necklace };

/// Conformal developing map of a ring domain on its quotient strip.
class DevelopingMap {
  public:
    MapMode mode() const { return mode_; }
    int n() const { return n_; }
    double eta() const { return eta_; }
    double tau() const { return tau_; }
    double vartheta() const { return vartheta_; }
    double period() const { return 2.0 * n_ * vartheta_; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }

    Complex g(Complex z) const;
    Complex gprime(Complex z) const;
    /// Jet of eta = g''/(2 g') at z (Taylor coefficients up to `order`),
    /// computed from the elliptic representation, not finite differences.
    Jet eta_jet(Complex z, int order) const;

    const WeierstrassData& weier() const { return data_; }
    const Weierstrass& lattice() const { return *wp_; }

    // grid samples (filled by developing_map / map factories)
    GridSpec grid;
    Eigen::MatrixXcd G, Gp;

  private:
    friend DevelopingMap developing_map(const ModelParams&, const CoeffPair&, const GridSpec&,
                                        bool);
    friend DevelopingMap radial_map(int);
    friend DevelopingMap necklace_map(int);

    Complex log_g_raw(Complex z) const; // closed form before normalization

    MapMode mode_ = MapMode::closed_form;
    int n_ = 2;
    double eta_ = 0, tau_ = 0, vartheta_ = 0;
    double x_min_ = 0, x_max_ = 0;
    double radial_c1_ = 0;
    WeierstrassData data_;
    std::shared_ptr<const Weierstrass> wp_;
};

/// Build the closed-form developing map for ring parameters (eta must lie
/// on the level curve Per = 1/n for a closed domain). Verifies mu and
/// cross-validates against integration of g''/g' = 2 omega_z on a coarse
/// subgrid unless `skip_crossval`.
DevelopingMap developing_map(const ModelParams& p, const CoeffPair& coeffs,
                             const GridSpec& grid, bool skip_crossval = false);

/// tau = 1 radial map g = -exp(-c1 z), c1 = 1/(2 sqrt(n^2-1)).
DevelopingMap radial_map(int n);

/// tau = 0 necklace map g = -cos(pi/n) + sin(pi/n) tan(z/4 - pi/(2n)).
DevelopingMap necklace_map(int n);

/// Full Serrin solution data on the quotient strip [s, s*] x one period.
struct DomainField {
    ModelParams params;
    int n = 0;
    double s = 0, s_star = 0;
    double q_hopf = 0;
    double vartheta = 0;
    double a1 = 0, a2 = 0, b1 = 0, b2 = 0; // Serrin data (outward-normal sign)
    GridSpec grid;
    Eigen::MatrixXcd G, Gp;
    Eigen::MatrixXd omega; // log|g'|
    Eigen::MatrixXd sigma; // from the quadrature formula in the coefficients
    Eigen::MatrixXd v;

    // x-profiles of the capillary data (defined away from x = 0)
    double a_of(double x) const;
    double b_of(double x) const;
    double c_of(double x) const;

    std::shared_ptr<const CoeffPair> coeffs;
    std::shared_ptr<const DevelopingMap> dev;

    std::vector<Complex> boundary_curve(bool exterior, int samples = 4096) const;
};

/// Assemble v = a + c sigma over [s, s*] with the removable x = 0
/// singularity evaluated through the combined quadrature form.
DomainField solution_field(const ModelParams& p, const DevelopingMap& dev,
                           const CoeffPair& coeffs, double s,
                           std::optional<GridSpec> grid_override = std::nullopt);

/// Exact radial annulus field on [s1, s2] (tau = 1 closed forms).
DomainField radial_limit(int n, double s1, double s2,
                         std::optional<GridSpec> grid_override = std::nullopt);

/// Closed-form tau = 0 necklace data for inner parameter s.
struct NecklaceReport {
    int n = 0;
    double s = 0;
    double radius = 0;            // R = 1 / |kappa(s)|
    Complex center{0, 0};         // center of the boundary disk through p0, p1
    Complex p0{0, 0}, p1{0, 0};   // arc endpoints on the unit circle
    double orthogonality = 0;     // | |center|^2 - (1 + R^2) |
    bool embedded = false;        // orthogonality within tolerance
    double paraboloid_a_gap = 0;  // |a1 - a2| of the limit solution (0)
    double paraboloid_b_sum = 0;  // |b1 + b2| of the limit solution (0)
    double formula_c_hat = 0;     // printed tangent-intersection formula, logged
};

NecklaceReport necklace_limit(int n, double s);

/// Verify the dihedral symmetry of the map (and of a constructed field's
/// boundary curves when given); returns the group order 2n.
struct SymmetryViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
int dihedral_check(const DevelopingMap& dev, const DomainField* field = nullptr,
                   double tol = 1e-8, double* residual_out = nullptr);

} // namespace serrin
