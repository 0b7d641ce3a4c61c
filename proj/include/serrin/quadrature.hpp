#pragma once

#include <functional>
#include <stdexcept>
#include <utility>

namespace serrin {

enum class Endpoint { regular, inv_sqrt };

/// Thrown when adaptive refinement cannot reach the requested tolerance;
/// carries the best estimate and its error bound.
struct AccuracyError : std::runtime_error {
    double best_estimate;
    double error_bound;
    AccuracyError(double est, double err)
        : std::runtime_error("quadrature did not converge to requested tolerance"),
          best_estimate(est), error_bound(err) {}
};

/// Integrate f over [a, b] where f may have inverse-square-root
/// singularities at the declared endpoints. The declared singularities are
/// removed by substitution (t = a + (b-a) sin^2 for two, t = a + u^2 or
/// t = b - u^2 for one) and the transformed integrand is handled by
/// adaptive Gauss-Kronrod to the requested tolerance.
double singular_quad(const std::function<double(double)>& f, double a, double b,
                     std::pair<Endpoint, Endpoint> sing, double tol = 1e-10);

/// Distance-aware variant: the integrand receives (t, t-a, b-t) with the
/// endpoint distances computed exactly from the substitution variable, so
/// integrands of the form R(t)/sqrt((t-a)(b-t)) can be evaluated without
/// cancellation and refined to full precision.
double singular_quad(const std::function<double(double, double, double)>& f, double a,
                     double b, std::pair<Endpoint, Endpoint> sing, double tol = 1e-10);

/// Adaptive Gauss-Kronrod on a regular integrand.
double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-12);

} // namespace serrin
