#pragma once

#include "serrin/grid.hpp"
#include "serrin/types.hpp"

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

namespace serrin {

/// Aggregated residual report for a constructed domain.
struct VerifyReport {
    double pde_residual_max = 0;
    double dirichlet_stdev[2] = {0, 0};
    double neumann_stdev[2] = {0, 0};
    double hopf_mean = 0;
    double hopf_stdev = 0;
    double harmonicity_omega = 0;
    bool embedded = false;
    std::map<std::string, double> details;

    bool within(double pde_tol, double dir_tol, double neu_tol, double hopf_tol) const {
        return pde_residual_max < pde_tol && dirichlet_stdev[0] < dir_tol &&
               dirichlet_stdev[1] < dir_tol && neumann_stdev[0] < neu_tol &&
               neumann_stdev[1] < neu_tol && hopf_stdev < hopf_tol;
    }
};

/// 4th-order centered-stencil Laplacian residual of `field` minus `rhs`
/// (pass a zero matrix to test harmonicity). Only interior nodes at least
/// two cells from the boundary are filled; others are NaN and excluded
/// from the max statistic.
Eigen::MatrixXd fd_laplacian(const Eigen::MatrixXd& field, double hx, double hy);
double fd_laplacian_max_residual(const Eigen::MatrixXd& field, const Eigen::MatrixXd& rhs,
                                 double hx, double hy);

/// 4th-order centered first/second/mixed derivatives on the interior.
Eigen::MatrixXd fd_dx(const Eigen::MatrixXd& f, double hx);
Eigen::MatrixXd fd_dy(const Eigen::MatrixXd& f, double hy);

/// One-sided 4th-order x-derivative at the first or last column.
Eigen::VectorXd fd_dx_onesided(const Eigen::MatrixXd& f, double hx, bool at_x0);

/// Hopf differential q = v_zz - 2 omega_z v_z by finite differences over
/// interior nodes; returns (mean, stdev) of the real part and records the
/// max imaginary part magnitude in *imag_max if given.
std::pair<double, double> hopf_estimate(const Eigen::MatrixXd& v, const Eigen::MatrixXd& omega,
                                        double hx, double hy, double* imag_max = nullptr);

/// Least-squares capillary fit along the column nearest x0: v = a + c sigma
/// + d1 Re g + d2 Im g and its x-derivative counterpart. Returns the two
/// residual stdevs and the fitted constants (a, c, d1, d2, b).
struct CapillaryFit {
    double r1 = 0, r2 = 0;
    double a = 0, c = 0, d1 = 0, d2 = 0, b = 0;
    bool skipped = false;
};
CapillaryFit capillary_residual(const Eigen::MatrixXd& v, const Eigen::MatrixXcd& g,
                                const GridSpec& grid, double x0);

/// Self-intersection test for a polyline by a sweep over segments.
/// Raw per-segment-pair events are clustered into geometric points
/// (radius 2% of the bounding-box diagonal).
struct CurveCheck {
    bool simple = true;
    int crossings = 0;
    int tangencies = 0; // near-miss within tolerance, reported separately
    std::vector<Complex> crossing_points;
    std::vector<Complex> tangent_points;
};
CurveCheck simple_curve_check(const std::vector<Complex>& polyline, bool closed,
                              double tangent_tol = 1e-9);

double stdev(const Eigen::VectorXd& v);

/// Hausdorff distance between two polylines (closed or open), by point-to-
/// segment distances both ways.
double hausdorff_polyline(const std::vector<Complex>& a, const std::vector<Complex>& b,
                          bool closed);

} // namespace serrin
