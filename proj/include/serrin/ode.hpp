#pragma once

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace serrin {

/// Integration blew up (or stalled) before reaching the requested point;
/// carries the last valid abscissa.
struct HorizonError : std::runtime_error {
    double last_x;
    explicit HorizonError(double x)
        : std::runtime_error("ODE integration horizon reached"), last_x(x) {}
};

/// Dormand-Prince 5(4) with adaptive step control.
///
/// Dense output is provided by storing value and right-hand side at each
/// accepted node; between nodes the solution is rebuilt by quintic Hermite
/// interpolation, with second derivatives supplied by the caller through
/// the optional `deriv2` callback (exact along the ODE). With the default
/// tolerances this keeps interpolation error at the level of the local
/// truncation error.
template <int N>
class DormandPrince {
  public:
    using Vec = Eigen::Matrix<double, N, 1>;
    using Rhs = std::function<Vec(double, const Vec&)>;

    struct Options {
        double abs_tol = 1e-12;
        double rel_tol = 1e-10;
        double h_init = 1e-3;
        double h_max = 0.5;
        double blowup = 1e12;
        long max_steps = 2'000'000;
    };

    struct Node {
        double x;
        Vec y;
        Vec f;  // rhs at (x, y)
        Vec d2; // second derivative (zero if no deriv2 callback)
    };

    DormandPrince(Rhs rhs, Options opt = {}) : rhs_(std::move(rhs)), opt_(opt) {}

    /// Optional exact second derivative y'' = d2(x, y) for quintic dense output.
    void set_deriv2(std::function<Vec(double, const Vec&)> d2) { deriv2_ = std::move(d2); }

    struct Run {
        std::vector<Node> nodes;
        bool reached = false; // hit x1
        bool stopped = false; // ended by the stop predicate (else: blowup)
    };

    /// Integrate from (x0, y0) to x1 (either direction), recording nodes.
    /// An optional stop predicate, checked at accepted nodes, ends the run
    /// early; blowup also ends it with reached = false.
    Run integrate(double x0, Vec y0, double x1,
                  const std::function<bool(double, const Vec&)>& stop = nullptr) const {
        Run run;
        double dir = (x1 >= x0) ? 1.0 : -1.0;
        double x = x0;
        Vec y = y0;
        Vec f = rhs_(x, y);
        run.nodes.push_back(make_node(x, y, f));
        if (std::abs(x1 - x0) < 4e-16 * (1.0 + std::abs(x0))) {
            run.reached = true;
            return run;
        }
        double h = std::min(opt_.h_init, std::abs(x1 - x0)) * dir;
        long steps = 0;
        while (dir * (x1 - x) > 0) {
            if (++steps > opt_.max_steps) throw HorizonError(x);
            if (dir * (x + h - x1) > 0) h = x1 - x;
            Vec y_new, f_new;
            double err = step(x, y, f, h, y_new, f_new);
            double tol = opt_.abs_tol + opt_.rel_tol * std::max(y.norm(), y_new.norm());
            if (err <= tol) {
                x += h;
                y = y_new;
                f = f_new;
                run.nodes.push_back(make_node(x, y, f));
                if (y.norm() > opt_.blowup) return run;
                if (stop && stop(x, y)) {
                    run.stopped = true;
                    return run;
                }
            }
            double fac = 0.9 * std::pow(tol / std::max(err, 1e-300), 0.2);
            fac = std::min(5.0, std::max(0.2, fac));
            h *= fac;
            if (std::abs(h) > opt_.h_max) h = opt_.h_max * dir;
            if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(x))) throw HorizonError(x);
        }
        run.reached = true;
        return run;
    }

  private:
    Node make_node(double x, const Vec& y, const Vec& f) const {
        Node nd{x, y, f, Vec::Zero()};
        if (deriv2_) nd.d2 = deriv2_(x, y);
        return nd;
    }

    // One DP5(4) step; returns error norm estimate and fills y_new, f_new (FSAL).
    double step(double x, const Vec& y, const Vec& f, double h, Vec& y_new, Vec& f_new) const {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        const Vec k1 = f;
        const Vec k2 = rhs_(x + c2 * h, y + h * (0.2 * k1));
        const Vec k3 = rhs_(x + c3 * h, y + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
        const Vec k4 = rhs_(x + c4 * h, y + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
        const Vec k5 = rhs_(x + c5 * h, y + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                                                 64448.0 / 6561 * k3 - 212.0 / 729 * k4));
        const Vec k6 = rhs_(x + h, y + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 +
                                            46732.0 / 5247 * k3 + 49.0 / 176 * k4 -
                                            5103.0 / 18656 * k5));
        y_new = y + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                         2187.0 / 6784 * k5 + 11.0 / 84 * k6);
        f_new = rhs_(x + h, y_new);
        const Vec err_v = h * (71.0 / 57600 * k1 - 71.0 / 16695 * k3 + 71.0 / 1920 * k4 -
                               17253.0 / 339200 * k5 + 22.0 / 525 * k6 - 1.0 / 40 * f_new);
        return err_v.norm();
    }

    Rhs rhs_;
    std::function<Vec(double, const Vec&)> deriv2_;
    Options opt_;
};

/// Piecewise quintic Hermite interpolant over integration nodes
/// (value, first and second derivative at both cell ends).
template <int N>
class HermiteInterp {
  public:
    using Vec = Eigen::Matrix<double, N, 1>;
    using Node = typename DormandPrince<N>::Node;

    HermiteInterp() = default;
    explicit HermiteInterp(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
        ascending_ = nodes_.size() < 2 || nodes_.back().x >= nodes_.front().x;
        // fall back to cubic Hermite when no second-derivative data was recorded
        quintic_ = false;
        for (const auto& nd : nodes_)
            if (nd.d2.norm() != 0.0) {
                quintic_ = true;
                break;
            }
    }

    double x_min() const { return ascending_ ? nodes_.front().x : nodes_.back().x; }
    double x_max() const { return ascending_ ? nodes_.back().x : nodes_.front().x; }

    Vec operator()(double x) const { return eval<0>(x); }
    Vec deriv(double x) const { return eval<1>(x); }

  private:
    template <int D>
    Vec eval(double x) const {
        const Node &a = nodes_[cell(x)], &b = nodes_[cell(x) + 1];
        double h = b.x - a.x;
        double t = (x - a.x) / h;
        double t2 = t * t, t3 = t2 * t;
        if (!quintic_) {
            if constexpr (D == 0) {
                double H0 = 1 - 3 * t2 + 2 * t3;
                double H1 = t - 2 * t2 + t3;
                double H2 = -t2 + t3;
                double H3 = 3 * t2 - 2 * t3;
                return H0 * a.y + (h * H1) * a.f + (h * H2) * b.f + H3 * b.y;
            } else {
                double d0 = (-6 * t + 6 * t2) / h;
                double d1 = 1 - 4 * t + 3 * t2;
                double d2 = -2 * t + 3 * t2;
                double d3 = (6 * t - 6 * t2) / h;
                return d0 * a.y + d1 * a.f + d2 * b.f + d3 * b.y;
            }
        }
        double t4 = t3 * t, t5 = t4 * t;
        if constexpr (D == 0) {
            double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
            double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
            double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
            double H3 = 0.5 * t3 - t4 + 0.5 * t5;
            double H4 = -4 * t3 + 7 * t4 - 3 * t5;
            double H5 = 10 * t3 - 15 * t4 + 6 * t5;
            return H0 * a.y + (h * H1) * a.f + (h * h * H2) * a.d2 + (h * h * H3) * b.d2 +
                   (h * H4) * b.f + H5 * b.y;
        } else {
            double d0 = (-30 * t2 + 60 * t3 - 30 * t4) / h;
            double d1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
            double d2 = (t - 4.5 * t2 + 6 * t3 - 2.5 * t4) * h;
            double d3 = (1.5 * t2 - 4 * t3 + 2.5 * t4) * h;
            double d4 = -12 * t2 + 28 * t3 - 15 * t4;
            double d5 = (30 * t2 - 60 * t3 + 30 * t4) / h;
            return d0 * a.y + d1 * a.f + d2 * a.d2 + d3 * b.d2 + d4 * b.f + d5 * b.y;
        }
    }

    std::size_t cell(double x) const {
        if (nodes_.size() < 2) throw std::runtime_error("interpolant has no cells");
        std::size_t lo = 0, hi = nodes_.size() - 1;
        bool asc = ascending_;
        auto before = [&](double a, double b) { return asc ? a <= b : a >= b; };
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (before(nodes_[mid].x, x))
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    }

    std::vector<Node> nodes_;
    bool ascending_ = true;
    bool quintic_ = false;
};

/// Bisection for a continuous function with a sign change on [a, b].
double bisect(const std::function<double(double)>& f, double a, double b,
              double xtol = 1e-12, int max_iter = 200);

} // namespace serrin
