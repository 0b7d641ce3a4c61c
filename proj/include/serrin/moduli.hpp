#pragma once

#include "serrin/coeffs.hpp"

#include <array>
#include <vector>

namespace serrin {

class DevelopingMap;

/// Half period of the x = 0 profile, as the regularized integral over
/// t in [0, 1]; analytic through tau = 1.
double vartheta(double eta, double tau);

/// Arc length of g(iy) over one half period; lies in (0, pi).
double theta_arc(double eta, double tau);

/// Per = Theta / pi, the closing ratio.
inline double per(double eta, double tau) { return theta_arc(eta, tau) / 3.14159265358979323846; }

/// The unique eta with Per(eta, tau) = 1/n.
double eta_level(int n, double tau);

/// The conjugate boundary parameter: the unique s* in (x_b^+, x_a^+) with
/// beta/alpha equal at s and s*. Requires s in (x_b^-, 0).
double s_star(const CoeffPair& coeffs, double s);

/// Inverse of s -> s*: the s in (x_b^-, 0) with s*(s) = target.
double s_star_inverse(const CoeffPair& coeffs, double target);

/// Signed clearance of the arc y in (0, vartheta) of g(x0 + iy) from the
/// sector boundary L0 u L1; positive while the arc stays strictly inside.
double sector_clearance(const DevelopingMap& dev, double x0, int samples = 512);

/// Smallest x0 > 0 at which the arc y in (0, vartheta) of g(x0 + iy)
/// touches the sector boundary L0 u L1. If the sector predicate never
/// fails up to x_a^+ - margin, returns that capped value and sets *capped.
double embed_xhat(const DevelopingMap& dev, const CoeffPair& coeffs, bool* capped = nullptr);

/// Embeddedness window: h0 = -xhat, h1 solves (h1)* = xhat.
std::array<double, 2> embed_bounds(const DevelopingMap& dev, const CoeffPair& coeffs);

/// One row of the moduli-space sweep table.
struct ModuliPoint {
    int n = 0;
    double tau = 0, eta = 0, vartheta = 0, theta_arc = 0;
    double h0 = 0, h1 = 0, s_star_of_h1 = 0;
};

ModuliPoint moduli_point(int n, double tau);

/// Bifurcation loci in the (s, tau) window: zero sets of
/// Psi1 = b(s) + b(s*) and Psi2 = a(s) - a(s*), traced by continuation
/// from seeds on the tau = 1 edge.
struct BifurcationCurves {
    std::vector<std::array<double, 2>> upsilon1; // (s, tau)
    std::vector<std::array<double, 2>> upsilon2;
    double seed1 = 0, seed2 = 0; // tau = 1 seeds in s
    std::string diagnostics;
};

BifurcationCurves bifurcation_loci(int n, const std::vector<double>& tau_grid);

/// Psi evaluations at a given (s, tau) with eta = eta_n(tau); used by the
/// sweep table to mark crossings.
double psi1(const CoeffPair& coeffs, double s);
double psi2(const ModelParams& p, const CoeffPair& coeffs, double s);

} // namespace serrin
