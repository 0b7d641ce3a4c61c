#include "serrin/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace serrin {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// 4th order first derivative along a row/column vector at interior offsets
inline double d1_4(double m2, double m1, double p1, double p2, double h) {
    return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
}
inline double d2_4(double m2, double m1, double c, double p1, double p2, double h) {
    return (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
}
} // namespace

double stdev(const Eigen::VectorXd& v) {
    double mean = v.mean();
    return std::sqrt((v.array() - mean).square().sum() / v.size());
}

Eigen::MatrixXd fd_laplacian(const Eigen::MatrixXd& f, double hx, double hy) {
    const long ny = f.rows(), nx = f.cols();
    if (nx < 5 || ny < 5) throw std::invalid_argument("fd_laplacian needs >= 5 nodes per direction");
    Eigen::MatrixXd r = Eigen::MatrixXd::Constant(ny, nx, kNaN);
    for (long j = 2; j < ny - 2; ++j)
        for (long i = 2; i < nx - 2; ++i) {
            double lxx = d2_4(f(j, i - 2), f(j, i - 1), f(j, i), f(j, i + 1), f(j, i + 2), hx);
            double lyy = d2_4(f(j - 2, i), f(j - 1, i), f(j, i), f(j + 1, i), f(j + 2, i), hy);
            r(j, i) = lxx + lyy;
        }
    return r;
}

double fd_laplacian_max_residual(const Eigen::MatrixXd& f, const Eigen::MatrixXd& rhs,
                                 double hx, double hy) {
    Eigen::MatrixXd lap = fd_laplacian(f, hx, hy);
    double m = 0;
    for (long j = 2; j < f.rows() - 2; ++j)
        for (long i = 2; i < f.cols() - 2; ++i)
            m = std::max(m, std::abs(lap(j, i) + rhs(j, i)));
    return m;
}

Eigen::MatrixXd fd_dx(const Eigen::MatrixXd& f, double hx) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Constant(f.rows(), f.cols(), kNaN);
    for (long j = 0; j < f.rows(); ++j)
        for (long i = 2; i < f.cols() - 2; ++i)
            r(j, i) = d1_4(f(j, i - 2), f(j, i - 1), f(j, i + 1), f(j, i + 2), hx);
    return r;
}

Eigen::MatrixXd fd_dy(const Eigen::MatrixXd& f, double hy) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Constant(f.rows(), f.cols(), kNaN);
    for (long j = 2; j < f.rows() - 2; ++j)
        for (long i = 0; i < f.cols(); ++i)
            r(j, i) = d1_4(f(j - 2, i), f(j - 1, i), f(j + 1, i), f(j + 2, i), hy);
    return r;
}

Eigen::VectorXd fd_dx_onesided(const Eigen::MatrixXd& f, double hx, bool at_x0) {
    // 7-point one-sided 6th-order stencil (boundary Neumann data is a
    // headline metric, so the one-sided truncation error must sit well
    // below it at the default grid)
    static const double c[7] = {-49.0 / 20, 6.0, -15.0 / 2, 20.0 / 3, -15.0 / 4, 6.0 / 5,
                                -1.0 / 6};
    Eigen::VectorXd r = Eigen::VectorXd::Zero(f.rows());
    const long n = f.cols();
    for (long j = 0; j < f.rows(); ++j) {
        double acc = 0;
        for (int k = 0; k < 7; ++k)
            acc += c[k] * (at_x0 ? f(j, k) : -f(j, n - 1 - k));
        r(j) = acc / hx;
    }
    return r;
}

std::pair<double, double> hopf_estimate(const Eigen::MatrixXd& v, const Eigen::MatrixXd& omega,
                                        double hx, double hy, double* imag_max) {
    const long ny = v.rows(), nx = v.cols();
    std::vector<double> re, im;
    re.reserve((nx - 4) * (ny - 4));
    for (long j = 2; j < ny - 2; ++j)
        for (long i = 2; i < nx - 2; ++i) {
            double vx = d1_4(v(j, i - 2), v(j, i - 1), v(j, i + 1), v(j, i + 2), hx);
            double vy = d1_4(v(j - 2, i), v(j - 1, i), v(j + 1, i), v(j + 2, i), hy);
            double vxx = d2_4(v(j, i - 2), v(j, i - 1), v(j, i), v(j, i + 1), v(j, i + 2), hx);
            double vyy = d2_4(v(j - 2, i), v(j - 1, i), v(j, i), v(j + 1, i), v(j + 2, i), hy);
            // mixed derivative: 4th order cross stencil of first derivatives
            double vxy = d1_4(
                d1_4(v(j - 2, i - 2), v(j - 2, i - 1), v(j - 2, i + 1), v(j - 2, i + 2), hx),
                d1_4(v(j - 1, i - 2), v(j - 1, i - 1), v(j - 1, i + 1), v(j - 1, i + 2), hx),
                d1_4(v(j + 1, i - 2), v(j + 1, i - 1), v(j + 1, i + 1), v(j + 1, i + 2), hx),
                d1_4(v(j + 2, i - 2), v(j + 2, i - 1), v(j + 2, i + 1), v(j + 2, i + 2), hx),
                hy);
            double wx = d1_4(omega(j, i - 2), omega(j, i - 1), omega(j, i + 1), omega(j, i + 2), hx);
            double wy = d1_4(omega(j - 2, i), omega(j - 1, i), omega(j + 1, i), omega(j + 2, i), hy);
            double qre = 0.25 * (vxx - vyy) - 0.5 * (wx * vx - wy * vy);
            double qim = -0.5 * vxy + 0.5 * (wx * vy + wy * vx);
            re.push_back(qre);
            im.push_back(std::abs(qim));
        }
    Eigen::Map<Eigen::VectorXd> rv(re.data(), long(re.size()));
    double mean = rv.mean();
    double sd = std::sqrt((rv.array() - mean).square().sum() / double(rv.size()));
    if (imag_max) *imag_max = im.empty() ? 0.0 : *std::max_element(im.begin(), im.end());
    return {mean, sd};
}

CapillaryFit capillary_residual(const Eigen::MatrixXd& v, const Eigen::MatrixXcd& g,
                                const GridSpec& grid, double x0) {
    CapillaryFit fit;
    int i0 = int(std::lround((x0 - grid.x0) / grid.dx()));
    i0 = std::clamp(i0, 2, grid.nx - 3);
    const long ny = v.rows();
    // columns: 1, sigma, Re g, Im g
    Eigen::MatrixXd A(ny, 4);
    Eigen::VectorXd rhs(ny);
    for (long j = 0; j < ny; ++j) {
        Complex gv = g(j, i0);
        A(j, 0) = 1.0;
        A(j, 1) = -0.5 * std::norm(gv);
        A(j, 2) = gv.real();
        A(j, 3) = gv.imag();
        rhs(j) = v(j, i0);
    }
    Eigen::VectorXd sol = A.colPivHouseholderQr().solve(rhs);
    fit.a = sol(0);
    fit.c = sol(1);
    fit.d1 = sol(2);
    fit.d2 = sol(3);
    fit.r1 = stdev(Eigen::VectorXd(A * sol - rhs));
    // derivative relation: v_x = b e^omega + c sigma_x + d1 (Re g)_x + d2 (Im g)_x
    double hx = grid.dx();
    Eigen::MatrixXd B(ny, 1);
    Eigen::VectorXd rhs2(ny);
    for (long j = 0; j < ny; ++j) {
        double vx = d1_4(v(j, i0 - 2), v(j, i0 - 1), v(j, i0 + 1), v(j, i0 + 2), hx);
        Complex gx = (g(j, i0 - 2) - 8.0 * g(j, i0 - 1) + 8.0 * g(j, i0 + 1) - g(j, i0 + 2)) /
                     (12.0 * hx);
        Complex gv = g(j, i0);
        double sigx = -(gv.real() * gx.real() + gv.imag() * gx.imag());
        double ew = std::abs(gx); // |g'| = e^omega (gx approximates g' here)
        B(j, 0) = ew;
        rhs2(j) = vx - fit.c * sigx - fit.d1 * gx.real() - fit.d2 * gx.imag();
    }
    Eigen::VectorXd bsol = B.colPivHouseholderQr().solve(rhs2);
    fit.b = bsol(0);
    fit.r2 = stdev(Eigen::VectorXd(B * bsol - rhs2));
    return fit;
}

CurveCheck simple_curve_check(const std::vector<Complex>& poly, bool closed, double tangent_tol) {
    CurveCheck out;
    const int n = int(poly.size());
    if (n < 3) throw std::invalid_argument("polyline too short");
    struct Seg {
        Complex a, b;
        int idx;
        double xmin, xmax;
    };
    std::vector<Seg> segs;
    segs.reserve(n);
    int m = closed ? n : n - 1;
    for (int i = 0; i < m; ++i) {
        Complex a = poly[i], b = poly[(i + 1) % n];
        if (std::abs(b - a) == 0.0) throw std::invalid_argument("zero-length segment");
        segs.push_back({a, b, i, std::min(a.real(), b.real()), std::max(a.real(), b.real())});
    }
    std::sort(segs.begin(), segs.end(), [](const Seg& s, const Seg& t) { return s.xmin < t.xmin; });

    auto orient = [](Complex a, Complex b, Complex c) {
        double v = (b.real() - a.real()) * (c.imag() - a.imag()) -
                   (b.imag() - a.imag()) * (c.real() - a.real());
        return v;
    };
    auto seg_dist = [](const Seg& s, const Seg& t) {
        // min distance between two segments
        auto pt_seg = [](Complex p, Complex a, Complex b) {
            Complex ab = b - a;
            double L2 = std::norm(ab);
            double u = std::clamp(((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / L2,
                                  0.0, 1.0);
            return std::abs(p - (a + u * ab));
        };
        return std::min(std::min(pt_seg(s.a, t.a, t.b), pt_seg(s.b, t.a, t.b)),
                        std::min(pt_seg(t.a, s.a, s.b), pt_seg(t.b, s.a, s.b)));
    };

    std::vector<Complex> cross_events, tang_events;
    std::vector<const Seg*> active;
    for (const auto& s : segs) {
        active.erase(std::remove_if(active.begin(), active.end(),
                                    [&](const Seg* t) { return t->xmax < s.xmin - tangent_tol; }),
                     active.end());
        for (const Seg* t : active) {
            int di = std::abs(s.idx - t->idx);
            bool adjacent = di == 1 || (closed && di == m - 1);
            if (adjacent) continue;
            double o1 = orient(s.a, s.b, t->a), o2 = orient(s.a, s.b, t->b);
            double o3 = orient(t->a, t->b, s.a), o4 = orient(t->a, t->b, s.b);
            bool crossing = (o1 * o2 < 0.0) && (o3 * o4 < 0.0);
            Complex loc = 0.25 * (s.a + s.b + t->a + t->b);
            if (crossing) {
                if (seg_dist(s, *t) < tangent_tol || std::min(std::abs(o1 * o2), std::abs(o3 * o4)) <
                                                         tangent_tol * tangent_tol) {
                    ++out.tangencies;
                    tang_events.push_back(loc);
                } else {
                    ++out.crossings;
                    cross_events.push_back(loc);
                }
            } else if (seg_dist(s, *t) < tangent_tol) {
                ++out.tangencies;
                tang_events.push_back(loc);
            }
        }
        active.push_back(&s);
    }
    out.simple = out.crossings == 0;
    // cluster events into geometric points
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (Complex w : poly) {
        xmin = std::min(xmin, w.real());
        xmax = std::max(xmax, w.real());
        ymin = std::min(ymin, w.imag());
        ymax = std::max(ymax, w.imag());
    }
    double radius = 0.02 * std::hypot(xmax - xmin, ymax - ymin);
    auto cluster = [&](const std::vector<Complex>& ev) {
        std::vector<Complex> pts;
        for (Complex e : ev) {
            bool merged = false;
            for (Complex& p : pts)
                if (std::abs(p - e) < radius) {
                    merged = true;
                    break;
                }
            if (!merged) pts.push_back(e);
        }
        return pts;
    };
    out.crossing_points = cluster(cross_events);
    out.tangent_points = cluster(tang_events);
    return out;
}

double hausdorff_polyline(const std::vector<Complex>& a, const std::vector<Complex>& b,
                          bool closed) {
    auto one_sided = [&](const std::vector<Complex>& p, const std::vector<Complex>& q) {
        double worst = 0;
        std::size_t m = closed ? q.size() : q.size() - 1;
        for (Complex w : p) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                Complex s = q[i], t = q[(i + 1) % q.size()];
                Complex d = t - s;
                double L2 = std::norm(d);
                double u = L2 > 0 ? std::clamp(((w - s).real() * d.real() +
                                                (w - s).imag() * d.imag()) / L2,
                                               0.0, 1.0)
                                  : 0.0;
                best = std::min(best, std::abs(w - (s + u * d)));
                if (best == 0) break;
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

} // namespace serrin
