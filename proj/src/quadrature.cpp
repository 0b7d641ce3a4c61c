#include "serrin/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace serrin {

namespace {
using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

double run_gk(const std::function<double(double)>& f, double a, double b, double tol) {
    double err = 0, l1 = 0;
    double v = GK::integrate(f, a, b, 15, tol, &err, &l1);
    double scale = std::max(1.0, l1);
    if (!(err <= 50.0 * tol * scale)) throw AccuracyError(v, err);
    return v;
}
} // namespace

double adaptive_quad(const std::function<double(double)>& f, double a, double b, double tol) {
    return run_gk(f, a, b, tol);
}

double singular_quad(const std::function<double(double, double, double)>& f, double a,
                     double b, std::pair<Endpoint, Endpoint> sing, double tol) {
    const double L = b - a;
    const bool sa = sing.first == Endpoint::inv_sqrt;
    const bool sb = sing.second == Endpoint::inv_sqrt;
    if (sa && sb) {
        // t = a + L sin^2(th); distances L sin^2, L cos^2 are exact in th
        auto g = [&](double th) {
            double s = std::sin(th), c = std::cos(th);
            double da = L * s * s, db = L * c * c;
            return f(a + da, da, db) * L * std::sin(2.0 * th);
        };
        return run_gk(g, 0.0, 1.57079632679489662, tol);
    }
    if (sa) {
        auto g = [&](double u) {
            double da = u * u;
            return f(a + da, da, L - da) * 2.0 * u;
        };
        return run_gk(g, 0.0, std::sqrt(L), tol);
    }
    if (sb) {
        auto g = [&](double u) {
            double db = u * u;
            return f(b - db, L - db, db) * 2.0 * u;
        };
        return run_gk(g, 0.0, std::sqrt(L), tol);
    }
    auto g = [&](double t) { return f(t, t - a, b - t); };
    return run_gk(g, a, b, tol);
}

double singular_quad(const std::function<double(double)>& f, double a, double b,
                     std::pair<Endpoint, Endpoint> sing, double tol) {
    return singular_quad(
        [&f](double t, double, double) { return f(t); }, a, b, sing, tol);
}

} // namespace serrin
