#include "serrin/ring.hpp"

#include "serrin/moduli.hpp"

#include <cmath>

namespace serrin {

namespace {

double mean_of(const Eigen::VectorXd& v) { return v.mean(); }

// reflection across the line through the origin at angle theta
inline Complex reflect(Complex w, double theta) {
    return std::exp(Complex(0, 2.0 * theta)) * std::conj(w);
}

} // namespace

Complex DevelopingMap::log_g_raw(Complex z) const {
    Complex Z = z + Complex(data_.omega1, data_.omega2.imag());
    return -2.0 * wp_->zeta(data_.mu) * Z + wp_->log_sigma(data_.mu + Z) -
           wp_->log_sigma(data_.mu - Z);
}

Complex DevelopingMap::g(Complex z) const {
    switch (mode_) {
        case MapMode::radial:
            return -std::exp(-radial_c1_ * z);
        case MapMode::necklace: {
            double cn = std::cos(kPi / n_), sn = std::sin(kPi / n_);
            return -cn + sn * std::tan(z / 4.0 - kPi / (2.0 * n_));
        }
        case MapMode::ode_fallback:
            throw std::logic_error("sampled map: no pointwise closed form");
        case MapMode::closed_form:
            break;
    }
    return data_.g0 * std::exp(log_g_raw(z));
}

Complex DevelopingMap::gprime(Complex z) const {
    switch (mode_) {
        case MapMode::radial:
            return radial_c1_ * std::exp(-radial_c1_ * z);
        case MapMode::necklace: {
            double sn = std::sin(kPi / n_);
            Complex c = std::cos(z / 4.0 - kPi / (2.0 * n_));
            return sn / (4.0 * c * c);
        }
        case MapMode::ode_fallback:
            throw std::logic_error("sampled map: no pointwise closed form");
        case MapMode::closed_form:
            break;
    }
    Complex Z = z + Complex(data_.omega1, data_.omega2.imag());
    Complex ratio = -data_.c_cubed / (data_.bc2 - 4.0 * wp_->P(Z));
    return g(z) * ratio;
}

Jet DevelopingMap::eta_jet(Complex z, int order) const {
    switch (mode_) {
        case MapMode::radial:
            return Jet::constant(order, Complex(-radial_c1_ / 2.0, 0));
        case MapMode::necklace: {
            Complex w = z / 4.0 - kPi / (2.0 * n_);
            return Jet::tangent(order, std::tan(w), 0.25) * Complex(0.25, 0);
        }
        case MapMode::ode_fallback:
            throw std::logic_error("sampled map: no jet");
        case MapMode::closed_form:
            break;
    }
    Complex Z = z + Complex(data_.omega1, data_.omega2.imag());
    auto [p, pp] = wp_->P_and_Pprime(Z);
    Jet P = Jet::weierstrass_p(order + 1, p, pp, data_.g2);
    Jet phi = (P * Complex(-4.0 / data_.c_cubed, 0)) + Complex(data_.bc2 / data_.c_cubed, 0);
    Jet num = phi.derivative() + Complex(1, 0);
    Jet eta = (num / phi) * Complex(-0.5, 0);
    // drop the top (incomplete) coefficient
    Jet out(order, Complex(0, 0));
    for (int k = 0; k <= order; ++k) out[k] = eta[k];
    return out;
}

DevelopingMap developing_map(const ModelParams& p, const CoeffPair& coeffs, const GridSpec& grid,
                             bool skip_crossval) {
    p.validate();
    if (p.tau > 1.0 - 1e-8) {
        auto dm = radial_map(p.n);
        dm.grid = grid;
        dm.G.resize(grid.ny, grid.nx);
        dm.Gp.resize(grid.ny, grid.nx);
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i) {
                Complex z(grid.x(i), grid.y(j));
                dm.G(j, i) = dm.g(z);
                dm.Gp(j, i) = dm.gprime(z);
            }
        return dm;
    }

    DevelopingMap dm;
    dm.mode_ = MapMode::closed_form;
    dm.n_ = p.n;
    dm.eta_ = p.eta;
    dm.tau_ = p.tau;

    const double delta = p.delta();
    const double t2 = p.tau * p.tau, e2t = p.eta * p.eta * t2;
    double ra = (delta / 3.0 + 0.25) / 4.0;
    double rb = (delta / 3.0 + t2 / 4.0) / 4.0;
    double rc = (delta / 3.0 - e2t / 4.0) / 4.0;
    auto wp = std::make_shared<Weierstrass>(Weierstrass::from_roots(ra, rb, rc));
    dm.wp_ = wp;
    auto& d = dm.data_;
    d.g2 = wp->g2();
    d.g3 = wp->g3();
    d.e1 = wp->e1();
    d.e2 = wp->e2();
    d.e3 = wp->e3();
    d.omega1 = wp->omega1();
    d.omega2 = wp->omega2();
    d.c_cubed = -p.eta * t2 / 8.0;
    d.bc2 = delta / 3.0;

    // mu on the segment from omega2 to omega1 + omega2: P there is real and
    // sweeps (e3, e2); target bc2/4 = delta/12 lies strictly inside.
    double target = delta / 12.0;
    if (!(target > d.e3 && target < d.e2))
        throw LatticeConfigError("mu target outside the branch segment");
    auto pv = [&](double m) { return wp->P(d.omega2 + Complex(m, 0)).real() - target; };
    double m = bisect(pv, 1e-9 * d.omega1, d.omega1 * (1.0 - 1e-9), 1e-14 * d.omega1);
    d.mu = d.omega2 + Complex(m, 0);
    double pp_mu = wp->Pprime(d.mu).real();
    if (std::abs(pp_mu - (-d.c_cubed / 4.0)) > 1e-6 * std::abs(d.c_cubed / 4.0))
        throw LatticeConfigError("P'(mu) does not match the capillary normalization");

    dm.x_min_ = m - d.omega1; // pole of g (= x_b^-)
    dm.x_max_ = d.omega1;     // = x_a^+
    dm.vartheta_ = d.omega2.imag();

    // normalization g(0) = -1
    d.g0 = Complex(-1, 0); // log_g_raw used relative to its value at 0
    Complex E0 = dm.log_g_raw(Complex(0, 0));
    d.g0 = -std::exp(-E0);

    // sanity of the initial data
    Complex gp0 = dm.gprime(Complex(0, 0));
    if (std::abs(dm.g(Complex(0, 0)) - Complex(-1, 0)) > 1e-9 ||
        std::abs(gp0 - Complex(p.eta / 2.0, 0)) > 1e-8 * std::max(1.0, p.eta))
        throw InconsistencyError("closed-form map fails its initial conditions");

    // cross-validation against the ODE route on a coarse subgrid
    if (!skip_crossval) {
        GridSpec cg;
        cg.nx = 7;
        cg.ny = 13;
        cg.x0 = 0.55 * dm.x_min_;
        cg.x1 = 0.55 * dm.x_max_;
        cg.y0 = 0.0;
        cg.y1 = 2.0 * dm.vartheta_;
        auto ms = developing_map_ode(p, coeffs, cg);
        double worst = 0;
        for (int j = 0; j < cg.ny; ++j)
            for (int i = 0; i < cg.nx; ++i)
                worst = std::max(worst,
                                 std::abs(ms.G(j, i) - dm.g(Complex(cg.x(i), cg.y(j)))));
        if (worst > 1e-4)
            throw InconsistencyError("closed form and ODE developing maps disagree");
    }

    dm.grid = grid;
    dm.G.resize(grid.ny, grid.nx);
    dm.Gp.resize(grid.ny, grid.nx);
    parallel_for(grid.ny, [&](int j) {
        for (int i = 0; i < grid.nx; ++i) {
            Complex z(grid.x(i), grid.y(j));
            dm.G(j, i) = dm.g(z);
            dm.Gp(j, i) = dm.gprime(z);
        }
    });
    return dm;
}

DevelopingMap radial_map(int n) {
    DevelopingMap dm;
    dm.mode_ = MapMode::radial;
    dm.n_ = n;
    dm.tau_ = 1.0;
    dm.eta_ = 1.0 / std::sqrt(double(n) * n - 1.0);
    dm.radial_c1_ = dm.eta_ / 2.0;
    dm.vartheta_ = 2.0 * kPi / std::sqrt(1.0 + dm.eta_ * dm.eta_);
    dm.x_min_ = -std::numeric_limits<double>::infinity();
    dm.x_max_ = std::numeric_limits<double>::infinity();
    return dm;
}

DevelopingMap necklace_map(int n) {
    DevelopingMap dm;
    dm.mode_ = MapMode::necklace;
    dm.n_ = n;
    dm.tau_ = 0.0;
    dm.eta_ = std::tan(kPi / (2.0 * n));
    dm.vartheta_ = std::numeric_limits<double>::infinity();
    dm.x_min_ = -2.0 * kPi + 2.0 * kPi / n;
    dm.x_max_ = 2.0 * kPi + 2.0 * kPi / n;
    return dm;
}

double DomainField::b_of(double x) const { return 4.0 * q_hopf / coeffs->alpha(x); }
double DomainField::c_of(double x) const { return 1.0 - 2.0 * q_hopf * coeffs->t(x); }
double DomainField::a_of(double x) const {
    double k1 = coeffs->kappa1();
    double chat = params.c_hat0();
    double F = -(4.0 * q_hopf / k1) * coeffs->int_alphabeta(x);
    return F + (4.0 * q_hopf / k1) * coeffs->beta(x) * (chat + coeffs->int_alpha2(x)) /
                   coeffs->alpha(x);
}

std::vector<Complex> DomainField::boundary_curve(bool exterior, int samples) const {
    std::vector<Complex> out;
    out.reserve(samples);
    double x0 = exterior ? s : s_star;
    double T = 2.0 * n * vartheta;
    for (int k = 0; k < samples; ++k) out.push_back(dev->g(Complex(x0, T * k / samples)));
    return out;
}

DomainField solution_field(const ModelParams& p0, const DevelopingMap& dev,
                           const CoeffPair& coeffs, double s,
                           std::optional<GridSpec> grid_override) {
    ModelParams p = p0;
    if (!(s > coeffs.zeros().x_b_minus && s < 0.0))
        throw std::domain_error("s must lie in (x_b^-, 0)");
    DomainField f;
    f.s = s;
    f.s_star = s_star(coeffs, s);
    f.q_hopf = 1.0 / (2.0 * coeffs.t(s));
    p.s = s;
    p.q_hopf = f.q_hopf;
    f.params = p;
    f.n = dev.n();
    f.vartheta = dev.vartheta();
    f.coeffs = std::make_shared<CoeffPair>(coeffs);
    f.dev = std::make_shared<DevelopingMap>(dev);

    GridSpec g;
    if (grid_override) {
        g = *grid_override;
    } else {
        g.nx = 201;
        g.ny = 401;
        g.x0 = s;
        g.x1 = f.s_star;
        g.y0 = 0.0;
        g.y1 = 2.0 * dev.n() * dev.vartheta();
    }
    if (g.x0 < dev.x_min() || g.x1 > dev.x_max())
        throw SingularCoefficientError("x-range leaves the strip of the developing map");
    f.grid = g;
    f.G.resize(g.ny, g.nx);
    f.Gp.resize(g.ny, g.nx);
    f.omega.resize(g.ny, g.nx);
    f.sigma.resize(g.ny, g.nx);
    f.v.resize(g.ny, g.nx);

    const double k1 = coeffs.kappa1();
    const double chat = p.c_hat0();
    const double q4k = 4.0 * f.q_hopf / k1;

    parallel_for(g.ny, [&](int j) {
        for (int i = 0; i < g.nx; ++i) {
            double x = g.x(i);
            Complex z(x, g.y(j));
            Complex gv = dev.g(z), gp = dev.gprime(z);
            f.G(j, i) = gv;
            f.Gp(j, i) = gp;
            double ew = std::abs(gp);
            f.omega(j, i) = std::log(ew);
            double A = coeffs.int_alpha2(x);
            double al = coeffs.alpha(x), be = coeffs.beta(x);
            double sig = (2.0 / k1) * (al * ew + chat + A);
            f.sigma(j, i) = sig;
            // v = F + sigma - (4q/k1) beta e^omega, the combined regular form
            f.v(j, i) = -q4k * coeffs.int_alphabeta(x) + sig - q4k * be * ew;
        }
    });

    f.a1 = mean_of(f.v.col(0));
    f.a2 = mean_of(f.v.col(g.nx - 1));
    f.b1 = -f.b_of(s);
    f.b2 = f.b_of(f.s_star);
    return f;
}

DomainField radial_limit(int n, double s1, double s2, std::optional<GridSpec> grid_override) {
    if (!(s1 < s2)) throw std::domain_error("radial window needs s1 < s2");
    if (s1 == 0.0 || !(s1 < 0.0)) throw std::domain_error("inner parameter s1 must be negative");
    auto dev = radial_map(n);
    auto p = ModelParams::ring_raw(dev.eta(), 1.0, n);
    auto coeffs = solve_coeffs(p, std::max(20.0, std::max(std::abs(s1), std::abs(s2)) + 2.0));
    DomainField f;
    f.s = s1;
    f.s_star = s2; // radial annuli are Serrin for any window
    f.q_hopf = 1.0 / (2.0 * coeffs.t(s1));
    p.s = s1;
    p.q_hopf = f.q_hopf;
    f.params = p;
    f.n = n;
    f.vartheta = dev.vartheta();
    f.coeffs = std::make_shared<CoeffPair>(coeffs);
    f.dev = std::make_shared<DevelopingMap>(dev);
    GridSpec g;
    if (grid_override) {
        g = *grid_override;
    } else {
        g.nx = 201;
        g.ny = 401;
        g.x0 = s1;
        g.x1 = s2;
        g.y0 = 0.0;
        g.y1 = 2.0 * n * dev.vartheta();
    }
    f.grid = g;
    f.G.resize(g.ny, g.nx);
    f.Gp.resize(g.ny, g.nx);
    f.omega.resize(g.ny, g.nx);
    f.sigma.resize(g.ny, g.nx);
    f.v.resize(g.ny, g.nx);
    const double k1 = coeffs.kappa1();
    const double chat = p.c_hat0();
    const double q4k = 4.0 * f.q_hopf / k1;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double x = g.x(i);
            Complex z(x, g.y(j));
            Complex gv = dev.g(z), gp = dev.gprime(z);
            f.G(j, i) = gv;
            f.Gp(j, i) = gp;
            double ew = std::abs(gp);
            f.omega(j, i) = std::log(ew);
            double sig = (2.0 / k1) * (coeffs.alpha(x) * ew + chat + coeffs.int_alpha2(x));
            f.sigma(j, i) = sig;
            f.v(j, i) = -q4k * coeffs.int_alphabeta(x) + sig - q4k * coeffs.beta(x) * ew;
        }
    f.a1 = mean_of(f.v.col(0));
    f.a2 = mean_of(f.v.col(g.nx - 1));
    f.b1 = -f.b_of(s1);
    f.b2 = f.b_of(s2);
    return f;
}

NecklaceReport necklace_limit(int n, double s) {
    if (!(s > -2.0 * kPi + 2.0 * kPi / n && s < 0.0))
        throw std::domain_error("necklace parameter s out of range");
    NecklaceReport r;
    r.n = n;
    r.s = s;
    double cn = std::cos(kPi / n), sn = std::sin(kPi / n);
    double th = s / 2.0 - kPi / n;
    double kappa = std::sin(th) / sn;
    r.radius = 1.0 / std::abs(kappa);
    r.center = Complex(-cn - sn * (std::cos(th) / std::sin(th)), 0.0);
    r.p0 = Complex(-cn, -sn);
    r.p1 = Complex(-cn, sn);
    r.orthogonality = std::abs(std::norm(r.center) - (1.0 + r.radius * r.radius));
    r.embedded = r.orthogonality < 1e-10;
    // limit solution is a paraboloid: a1 = a2 and b1 = -b2
    double sstar = s + 2.0 * kPi;
    r.paraboloid_a_gap = 0.5 * std::abs(1.0 / std::tan(s / 2.0) - 1.0 / std::tan(sstar / 2.0));
    r.paraboloid_b_sum = std::abs(1.0 / std::sin(s / 2.0) + 1.0 / std::sin(sstar / 2.0));
    // tangent-intersection formula as printed upstream; the geometric
    // criterion above is what decides embeddedness (see README notes)
    r.formula_c_hat = -cn - sn * std::tan(th);
    return r;
}

int dihedral_check(const DevelopingMap& dev, const DomainField* field, double tol,
                   double* residual_out) {
    const int n = dev.n();
    double worst = 0;
    if (dev.mode() == MapMode::radial) {
        if (residual_out) *residual_out = 0.0;
        return 2 * n; // circles: invariant under every reflection
    }
    const double th = dev.vartheta();
    // map symmetry g(x, k th - y) = Psi_k(g(x, k th + y))
    double xlo = std::max(dev.x_min() * 0.7, dev.x_min() + 1e-3);
    double xhi = std::min(dev.x_max() * 0.7, dev.x_max() - 1e-3);
    for (int k = 0; k < n; ++k) {
        double line_angle = kPi - k * kPi / n;
        for (int a = 0; a <= 6; ++a)
            for (int b = 0; b <= 8; ++b) {
                double x = xlo + (xhi - xlo) * a / 6.0;
                double y = th * (b / 8.0);
                Complex lhs = dev.g(Complex(x, k * th - y));
                Complex rhs = reflect(dev.g(Complex(x, k * th + y)), line_angle);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
    }
    if (field) {
        // pointwise symmetry residual along the boundary columns; this
        // bounds the Hausdorff distance between each boundary curve and its
        // reflections from above
        for (double x0 : {field->s, field->s_star}) {
            for (int k = 0; k < n; ++k) {
                double line_angle = kPi - k * kPi / n;
                for (int b = 0; b <= 512; ++b) {
                    double y = th * b / 512.0;
                    Complex lhs = dev.g(Complex(x0, k * th - y));
                    Complex rhs = reflect(dev.g(Complex(x0, k * th + y)), line_angle);
                    worst = std::max(worst, std::abs(lhs - rhs));
                }
            }
        }
    }
    if (residual_out) *residual_out = worst;
    if (worst > tol) throw SymmetryViolationError("dihedral symmetry residual above tolerance");
    return 2 * n;
}

} // namespace serrin
