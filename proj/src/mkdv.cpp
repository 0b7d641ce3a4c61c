#include "serrin/mkdv.hpp"

#include "serrin/band.hpp"
#include "serrin/ring.hpp"
#include "serrin/verify.hpp"

#include <Eigen/Dense>
#include <mutex>

namespace serrin {

namespace {
DiffPoly::Exp trim(DiffPoly::Exp e) {
    while (!e.empty() && e.back() == 0) e.pop_back();
    return e;
}
} // namespace

DiffPoly DiffPoly::variable(int k) {
    DiffPoly p;
    Exp e(k + 1, 0);
    e[k] = 1;
    p.terms_[trim(e)] = Rational(1);
    return p;
}

DiffPoly DiffPoly::constant(Rational c) {
    DiffPoly p;
    if (c != 0) p.terms_[{}] = std::move(c);
    return p;
}

void DiffPoly::add(const Exp& e, const Rational& c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        if (c != 0) terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

DiffPoly DiffPoly::operator+(const DiffPoly& o) const {
    DiffPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add(e, c);
    return r;
}

DiffPoly DiffPoly::operator-(const DiffPoly& o) const {
    DiffPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add(e, -c);
    return r;
}

DiffPoly DiffPoly::operator*(const DiffPoly& o) const {
    DiffPoly r;
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            Exp e(std::max(ea.size(), eb.size()), 0);
            for (std::size_t k = 0; k < ea.size(); ++k) e[k] += ea[k];
            for (std::size_t k = 0; k < eb.size(); ++k) e[k] += eb[k];
            r.add(trim(e), ca * cb);
        }
    return r;
}

DiffPoly DiffPoly::operator*(const Rational& c) const {
    DiffPoly r;
    if (c == 0) return r;
    for (const auto& [e, v] : terms_) r.terms_[e] = v * c;
    return r;
}

DiffPoly DiffPoly::total_derivative() const {
    DiffPoly r;
    for (const auto& [e, c] : terms_)
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (e[k] == 0) continue;
            Exp d = e;
            d[k] -= 1;
            if (d.size() <= k + 1) d.resize(k + 2, 0);
            d[k + 1] += 1;
            r.add(trim(d), c * int(e[k]));
        }
    return r;
}

bool DiffPoly::is_homogeneous(int* w) const {
    int seen = -1;
    for (const auto& [e, c] : terms_) {
        (void)c;
        int acc = 0;
        for (std::size_t k = 0; k < e.size(); ++k) acc += int(k + 1) * e[k];
        if (seen < 0)
            seen = acc;
        else if (acc != seen)
            return false;
    }
    if (w) *w = seen;
    return true;
}

int DiffPoly::weight() const {
    int w = -1;
    if (!is_homogeneous(&w)) throw RecursionIntegrityError("non-homogeneous polynomial");
    return w;
}

int DiffPoly::max_var() const {
    int m = -1;
    for (const auto& [e, c] : terms_) {
        (void)c;
        m = std::max<int>(m, int(e.size()) - 1);
    }
    return m;
}

Complex DiffPoly::eval(const std::vector<Complex>& jet) const {
    Complex acc(0, 0);
    for (const auto& [e, c] : terms_) {
        Complex term(c.convert_to<double>(), 0.0);
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (e[k] == 0) continue;
            if (k >= jet.size()) throw std::invalid_argument("jet too short for this operator");
            Complex p = jet[k];
            for (int i = 0; i < e[k]; ++i) term *= p;
        }
        acc += term;
    }
    return acc;
}

namespace {

// all exponent vectors over u_0..u_maxvar with KdV weight exactly w
void enumerate_monomials(int w, int maxvar, DiffPoly::Exp& cur, int var,
                         std::vector<DiffPoly::Exp>& out) {
    if (var > maxvar) {
        if (w == 0) out.push_back(trim(cur));
        return;
    }
    int unit = var + 1;
    for (int p = 0; p * unit <= w; ++p) {
        cur[var] = static_cast<unsigned short>(p);
        enumerate_monomials(w - p * unit, maxvar, cur, var + 1, out);
    }
    cur[var] = 0;
}

std::vector<DiffPoly::Exp> monomial_basis(int w, int maxvar) {
    std::vector<DiffPoly::Exp> out;
    DiffPoly::Exp cur(maxvar + 1, 0);
    enumerate_monomials(w, maxvar, cur, 0, out);
    return out;
}

// exact Gaussian elimination for the (overdetermined, consistent) system
std::vector<Rational> solve_exact(std::vector<std::vector<Rational>>& A,
                                  std::vector<Rational>& b, std::size_t ncols) {
    const std::size_t nrows = A.size();
    std::size_t row = 0;
    std::vector<long> pivot_of_col(ncols, -1);
    for (std::size_t col = 0; col < ncols && row < nrows; ++col) {
        std::size_t p = row;
        while (p < nrows && A[p][col] == 0) ++p;
        if (p == nrows) continue;
        std::swap(A[p], A[row]);
        std::swap(b[p], b[row]);
        Rational inv = A[row][col];
        for (std::size_t r = 0; r < nrows; ++r) {
            if (r == row || A[r][col] == 0) continue;
            Rational f = A[r][col] / inv;
            for (std::size_t c = col; c < ncols; ++c) A[r][c] -= f * A[row][c];
            b[r] -= f * b[row];
        }
        pivot_of_col[col] = long(row);
        ++row;
    }
    // consistency of the remaining rows
    for (std::size_t r = row; r < nrows; ++r)
        if (b[r] != 0) throw RecursionIntegrityError("mKdV recursion system inconsistent");
    std::vector<Rational> x(ncols, Rational(0));
    for (std::size_t col = 0; col < ncols; ++col) {
        long pr = pivot_of_col[col];
        if (pr < 0) throw RecursionIntegrityError("mKdV recursion system underdetermined");
        x[col] = b[pr] / A[pr][col];
    }
    return x;
}

} // namespace

const DiffPoly& mkdv_operator(int n) {
    if (n < -1) throw std::domain_error("mkdv_operator needs n >= -1");
    static std::vector<DiffPoly> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if (cache.empty()) {
        cache.push_back(DiffPoly());            // Q_{-1} = 0 (index shifted below)
        cache.push_back(DiffPoly::variable(0)); // Q_0 = u_0
    }
    while (int(cache.size()) - 2 < n) {
        int cur = int(cache.size()) - 2; // highest built so far
        const DiffPoly& Qn = cache.back();
        const DiffPoly u0 = DiffPoly::variable(0);
        const DiffPoly u1 = DiffPoly::variable(1);
        DiffPoly d1 = Qn.total_derivative();
        DiffPoly d2 = d1.total_derivative();
        DiffPoly d3 = d2.total_derivative();
        // eta Q''' - eta' Q'' - 4 eta^3 Q'
        DiffPoly rhs = u0 * d3 - u1 * d2 - (u0 * u0 * u0 * d1) * Rational(4);
        const int W = 2 * (cur + 1) + 1; // weight of Q_{cur+1}
        auto basis = monomial_basis(W, 2 * (cur + 1));
        // unknown Q: rows match coefficients of u0 D(Q) - u1 Q = rhs
        std::map<DiffPoly::Exp, std::size_t> row_of;
        std::vector<std::vector<Rational>> A;
        std::vector<Rational> b;
        auto row_for = [&](const DiffPoly::Exp& e) {
            auto it = row_of.find(e);
            if (it != row_of.end()) return it->second;
            std::size_t r = A.size();
            row_of.emplace(e, r);
            A.emplace_back(basis.size(), Rational(0));
            b.emplace_back(0);
            return r;
        };
        for (std::size_t c = 0; c < basis.size(); ++c) {
            DiffPoly m = DiffPoly::constant(Rational(1));
            for (std::size_t k = 0; k < basis[c].size(); ++k)
                for (int i = 0; i < basis[c][k]; ++i) m = m * DiffPoly::variable(int(k));
            DiffPoly lhs = u0 * m.total_derivative() - u1 * m;
            for (const auto& [e, coef] : lhs.terms()) A[row_for(e)][c] = coef;
        }
        for (const auto& [e, coef] : rhs.terms()) b[row_for(e)] = coef;
        auto x = solve_exact(A, b, basis.size());
        DiffPoly Q;
        for (std::size_t c = 0; c < basis.size(); ++c) {
            if (x[c] == 0) continue;
            DiffPoly acc = DiffPoly::constant(x[c]);
            for (std::size_t k = 0; k < basis[c].size(); ++k)
                for (int i = 0; i < basis[c][k]; ++i) acc = acc * DiffPoly::variable(int(k));
            Q = Q + acc;
        }
        if (!Q.empty() && Q.weight() != W)
            throw RecursionIntegrityError("generated operator has wrong weight");
        cache.push_back(std::move(Q));
    }
    return cache[std::size_t(n + 1)];
}

Complex evaluate_q(int n, const std::vector<Complex>& jet) {
    if (n >= 0 && int(jet.size()) < 2 * n + 1)
        throw std::invalid_argument("jet too short for Q_n");
    return mkdv_operator(n).eval(jet);
}

SpectralFit spectral_fit(const JetSampler& src, int m) {
    if (m < 0) throw std::domain_error("spectral_fit needs m >= 0");
    SpectralFit fit;
    fit.m = m;
    const int npts = int(src.points.size());
    fit.grid_points = npts;
    const int unknowns = 1 + m; // a0 and c_0..c_{m-1}
    Eigen::MatrixXd A(2 * npts, unknowns);
    Eigen::VectorXd rhs(2 * npts);
    for (int i = 0; i < npts; ++i) {
        auto jet = src.derivs(src.points[i], 2 * m);
        Complex qm = evaluate_q(m, jet);
        rhs(2 * i) = qm.real();
        rhs(2 * i + 1) = qm.imag();
        A(2 * i, 0) = 1.0;
        A(2 * i + 1, 0) = 0.0;
        for (int j = 0; j < m; ++j) {
            Complex qj = evaluate_q(j, jet);
            A(2 * i, 1 + j) = qj.real();
            A(2 * i + 1, 1 + j) = qj.imag();
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.rank() < unknowns) fit.degenerate = true;
    Eigen::VectorXd sol = svd.solve(rhs);
    fit.a0 = sol(0);
    fit.c.resize(m);
    for (int j = 0; j < m; ++j) fit.c[j] = sol(1 + j);
    double num = (A * sol - rhs).norm();
    double den = rhs.norm();
    fit.residual = den > 1e-300 ? num / den : num;
    return fit;
}

GenusResult genus_classify(const JetSampler& src, int m_max, double threshold) {
    GenusResult out;
    for (int m = 0; m <= m_max; ++m) {
        auto fit = spectral_fit(src, m);
        out.fits.push_back(fit);
        if (fit.residual < threshold) {
            out.genus = m;
            // cross-check the h-level relation on imaginary parts
            double num = 0, den = 0;
            for (Complex z : src.points) {
                auto jet = src.derivs(z, 2 * m);
                double hm = evaluate_q(m, jet).imag();
                double acc = hm;
                for (int j = 0; j < m; ++j) acc -= fit.c[j] * evaluate_q(j, jet).imag();
                num += acc * acc;
                den += hm * hm;
            }
            out.h_relation_residual = den > 1e-300 ? std::sqrt(num / den) : std::sqrt(num);
            return out;
        }
    }
    out.exceeded = true;
    return out;
}

namespace {

JacobiCheck jacobi_impl(const std::function<Jet(Complex, int)>& jet_at, const GridSpec& g,
                        const Eigen::MatrixXd& omega, double alpha1, double beta1,
                        double alpha2, double beta2, double b1, double b2, int n) {
    JacobiCheck out;
    Eigen::MatrixXd h(g.ny, g.nx);
    parallel_for(g.ny, [&](int j) {
        for (int i = 0; i < g.nx; ++i) {
            auto jet = jet_at(Complex(g.x(i), g.y(j)), 2 * n).derivatives();
            h(j, i) = evaluate_q(n, jet).imag();
        }
    });
    out.hmax = h.cwiseAbs().maxCoeff();
    if (out.hmax < 1e-13) return out; // identically zero field: residual 0
    auto hx0 = fd_dx_onesided(h, g.dx(), true);
    auto hx1 = fd_dx_onesided(h, g.dx(), false);
    double w1 = 0, w2 = 0;
    const bool dir1 = std::abs(b1) < 1e-12, dir2 = std::abs(b2) < 1e-12;
    out.dirichlet_variant = dir1 || dir2;
    for (int j = 0; j < g.ny; ++j) {
        // Robin factor from differentiating the capillary identity
        // 2 omega_x = -alpha e^{-omega} - beta e^{omega} through the
        // deformation: d(h)/dx = (alpha e^{-omega} - beta e^{omega}) h / 2
        if (dir1)
            w1 = std::max(w1, std::abs(h(j, 0)));
        else {
            double ew = std::exp(omega(j, 0));
            w1 = std::max(w1, std::abs(hx0(j) - 0.5 * (alpha1 / ew - beta1 * ew) * h(j, 0)));
        }
        if (dir2)
            w2 = std::max(w2, std::abs(h(j, g.nx - 1)));
        else {
            double ew = std::exp(omega(j, g.nx - 1));
            w2 = std::max(w2,
                          std::abs(hx1(j) - 0.5 * (alpha2 / ew - beta2 * ew) * h(j, g.nx - 1)));
        }
    }
    out.robin_residual[0] = w1 / out.hmax;
    out.robin_residual[1] = w2 / out.hmax;
    return out;
}

} // namespace

JacobiCheck jacobi_field_check(const DomainField& field, int n) {
    const auto& cp = *field.coeffs;
    auto jet_at = [&](Complex z, int order) { return field.dev->eta_jet(z, order); };
    return jacobi_impl(jet_at, field.grid, field.omega, cp.alpha(field.s), cp.beta(field.s),
                       cp.alpha(field.s_star), cp.beta(field.s_star), field.b1, field.b2, n);
}

JacobiCheck jacobi_field_check(const BandSolution& sol, int n) {
    const auto& cp = *sol.coeffs;
    auto jet_at = [&](Complex z, int order) { return sol.map->eta_jet(z, order); };
    double a1 = cp.alpha(-sol.x_star), a2 = cp.alpha(sol.x_star);
    return jacobi_impl(jet_at, sol.grid, sol.omega, a1, -a1, a2, -a2, -sol.b_boundary,
                       sol.b_boundary, n);
}

JetSampler sampler_for(const DomainField& field, int nx, int ny) {
    JetSampler s;
    s.jet_at = [dev = field.dev](Complex z, int order) { return dev->eta_jet(z, order); };
    double margin = 1e-2 * (field.s_star - field.s);
    double x0 = field.s + margin, x1 = field.s_star - margin;
    double T = 2.0 * field.n * field.vartheta;
    for (int i = 0; i < nx; ++i) {
        double x = x0 + (x1 - x0) * (i + 0.5) / nx;
        if (std::abs(x) < 1e-2) continue; // conditioning near the alpha zero
        for (int j = 0; j < ny; ++j) s.points.push_back(Complex(x, T * (j + 0.5) / ny));
    }
    return s;
}

JetSampler sampler_for(const BandSolution& sol, int nx, int ny) {
    JetSampler s;
    s.jet_at = [map = sol.map](Complex z, int order) { return map->eta_jet(z, order); };
    double margin = 1e-2 * (2.0 * sol.x_star);
    double x0 = -sol.x_star + margin, x1 = sol.x_star - margin;
    double T = 2.0 * sol.vartheta;
    for (int i = 0; i < nx; ++i) {
        double x = x0 + (x1 - x0) * (i + 0.5) / nx;
        if (std::abs(x) < 1e-2) continue;
        for (int j = 0; j < ny; ++j) s.points.push_back(Complex(x, T * (j + 0.5) / ny));
    }
    return s;
}

} // namespace serrin
