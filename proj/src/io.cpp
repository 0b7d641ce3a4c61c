#include "serrin/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace serrin {

using nlohmann::json;

void Tolerances::set(const std::string& key, double value) {
    if (value <= 0) throw FormatError("tolerance must be positive: " + key);
    if (key == "pde")
        pde = value;
    else if (key == "dirichlet")
        dirichlet = value;
    else if (key == "neumann")
        neumann = value;
    else if (key == "hopf")
        hopf = value;
    else if (key == "harmonicity")
        harmonicity = value;
    else if (key == "genus")
        genus = value;
    else
        throw FormatError("unknown tolerance key: " + key);
}

double Tolerances::get(const std::string& key) const {
    if (key == "pde") return pde;
    if (key == "dirichlet") return dirichlet;
    if (key == "neumann") return neumann;
    if (key == "hopf") return hopf;
    if (key == "harmonicity") return harmonicity;
    if (key == "genus") return genus;
    throw FormatError("unknown tolerance key: " + key);
}

void Tolerances::apply_env() {
    static const char* keys[] = {"pde", "dirichlet", "neumann", "hopf", "harmonicity", "genus"};
    for (const char* k : keys) {
        std::string var = "SERRIN_TOL_";
        for (const char* p = k; *p; ++p) var += char(std::toupper(*p));
        if (const char* v = std::getenv(var.c_str())) set(k, std::atof(v));
    }
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw FormatError("cannot open for writing: " + tmp.string());
        os << content;
    }
    std::filesystem::rename(tmp, path);
}

namespace {

// shared residual computations from sampled arrays alone
VerifyReport verify_from_samples(const GridSpec& g, const Eigen::MatrixXcd& G,
                                 const Eigen::MatrixXd& v, const Eigen::MatrixXd* omega_exact) {
    VerifyReport rep;
    Eigen::MatrixXd omega(g.ny, g.nx);
    if (omega_exact) {
        omega = *omega_exact;
    } else {
        // |g'| by 4th-order interior differences; one-sided at the edges
        Eigen::MatrixXd re(g.ny, g.nx), im(g.ny, g.nx);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                re(j, i) = G(j, i).real();
                im(j, i) = G(j, i).imag();
            }
        auto rex = fd_dx(re, g.dx()), imx = fd_dx(im, g.dx());
        auto re0 = fd_dx_onesided(re, g.dx(), true), im0 = fd_dx_onesided(im, g.dx(), true);
        auto re1 = fd_dx_onesided(re, g.dx(), false), im1 = fd_dx_onesided(im, g.dx(), false);
        // 4th-order stencil at the second / penultimate columns
        auto offset1 = [&](const Eigen::MatrixXd& f, int j, bool left) {
            const long n = f.cols();
            if (left)
                return (-3.0 * f(j, 0) - 10.0 * f(j, 1) + 18.0 * f(j, 2) - 6.0 * f(j, 3) +
                        f(j, 4)) /
                       (12.0 * g.dx());
            return (3.0 * f(j, n - 1) + 10.0 * f(j, n - 2) - 18.0 * f(j, n - 3) +
                    6.0 * f(j, n - 4) - f(j, n - 5)) /
                   (12.0 * g.dx());
        };
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double gr, gi;
                if (i == 0) {
                    gr = re0(j);
                    gi = im0(j);
                } else if (i == 1) {
                    gr = offset1(re, j, true);
                    gi = offset1(im, j, true);
                } else if (i == g.nx - 1) {
                    gr = re1(j);
                    gi = im1(j);
                } else if (i == g.nx - 2) {
                    gr = offset1(re, j, false);
                    gi = offset1(im, j, false);
                } else {
                    gr = rex(j, i);
                    gi = imx(j, i);
                }
                omega(j, i) = 0.5 * std::log(gr * gr + gi * gi);
            }
    }
    Eigen::MatrixXd rhs = (2.0 * (2.0 * omega).array().exp()).matrix();
    rep.pde_residual_max = fd_laplacian_max_residual(v, rhs, g.dx(), g.dy());
    rep.harmonicity_omega =
        fd_laplacian_max_residual(omega, Eigen::MatrixXd::Zero(g.ny, g.nx), g.dx(), g.dy());
    rep.dirichlet_stdev[0] = stdev(v.col(0));
    rep.dirichlet_stdev[1] = stdev(v.col(g.nx - 1));
    auto vx0 = fd_dx_onesided(v, g.dx(), true);
    auto vx1 = fd_dx_onesided(v, g.dx(), false);
    Eigen::VectorXd nb0(g.ny), nb1(g.ny);
    for (int j = 0; j < g.ny; ++j) {
        nb0(j) = vx0(j) * std::exp(-omega(j, 0));
        nb1(j) = vx1(j) * std::exp(-omega(j, g.nx - 1));
    }
    rep.neumann_stdev[0] = stdev(nb0);
    rep.neumann_stdev[1] = stdev(nb1);
    rep.details["neumann_mean_1"] = nb0.mean();
    rep.details["neumann_mean_2"] = nb1.mean();
    auto [hm, hs] = hopf_estimate(v, omega, g.dx(), g.dy());
    rep.hopf_mean = hm;
    rep.hopf_stdev = hs;
    return rep;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (long j = 0; j < m.rows(); ++j) {
        json row = json::array();
        for (long i = 0; i < m.cols(); ++i) row.push_back(m(j, i));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
    if (!rows.is_array() || rows.empty()) throw FormatError("matrix field missing");
    long ny = long(rows.size()), nx = long(rows[0].size());
    Eigen::MatrixXd m(ny, nx);
    for (long j = 0; j < ny; ++j) {
        if (long(rows[j].size()) != nx) throw FormatError("ragged matrix rows");
        for (long i = 0; i < nx; ++i) m(j, i) = rows[j][i].get<double>();
    }
    return m;
}

json verify_to_json(const VerifyReport& rep) {
    json v;
    v["pde_residual_max"] = rep.pde_residual_max;
    v["dirichlet_stdev"] = {rep.dirichlet_stdev[0], rep.dirichlet_stdev[1]};
    v["neumann_stdev"] = {rep.neumann_stdev[0], rep.neumann_stdev[1]};
    v["hopf_mean"] = rep.hopf_mean;
    v["hopf_stdev"] = rep.hopf_stdev;
    v["harmonicity_omega"] = rep.harmonicity_omega;
    v["embedded"] = rep.embedded;
    v["details"] = rep.details;
    return v;
}

json grid_arrays(const GridSpec& g, const Eigen::MatrixXcd& G, const Eigen::MatrixXd& v) {
    json out;
    json xs = json::array(), ys = json::array();
    for (int i = 0; i < g.nx; ++i) xs.push_back(g.x(i));
    for (int j = 0; j < g.ny; ++j) ys.push_back(g.y(j));
    out["x"] = std::move(xs);
    out["y"] = std::move(ys);
    Eigen::MatrixXd re(g.ny, g.nx), im(g.ny, g.nx);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            re(j, i) = G(j, i).real();
            im(j, i) = G(j, i).imag();
        }
    out["re_g"] = matrix_to_json(re);
    out["im_g"] = matrix_to_json(im);
    out["v"] = matrix_to_json(v);
    return out;
}

json fit_to_json(const SpectralFit& fit) {
    json m;
    m["m"] = fit.m;
    m["a0"] = fit.a0;
    m["c"] = fit.c;
    m["residual"] = fit.residual;
    return m;
}

} // namespace

VerifyReport build_verify(const DomainField& f) {
    VerifyReport rep = verify_from_samples(f.grid, f.G, f.v, &f.omega);
    // embeddedness: both boundary polylines simple, on opposite sides of S^1
    auto ext = f.boundary_curve(true);
    auto itr = f.boundary_curve(false);
    auto c1 = simple_curve_check(ext, true);
    auto c2 = simple_curve_check(itr, true);
    bool sides = true;
    for (auto w : ext) sides = sides && std::abs(w) > 1.0;
    for (auto w : itr) sides = sides && std::abs(w) < 1.0;
    rep.embedded = c1.simple && c2.simple && c1.tangencies == 0 && c2.tangencies == 0 && sides;
    rep.details["ext_crossings"] = c1.crossings;
    rep.details["int_crossings"] = c2.crossings;
    rep.details["ext_tangencies"] = c1.tangencies;
    rep.details["int_tangencies"] = c2.tangencies;
    // |g(iy)| = 1 when the axis column is inside the strip
    double worst = 0;
    for (int j = 0; j < f.grid.ny; ++j)
        worst = std::max(worst,
                         std::abs(std::abs(f.dev->g(Complex(0.0, f.grid.y(j)))) - 1.0));
    rep.details["unit_circle_residual"] = worst;
    return rep;
}

VerifyReport build_verify(const BandSolution& s) {
    VerifyReport rep = verify_from_samples(s.grid, s.G, s.v, &s.omega);
    auto emb = band_embedded_check(s);
    rep.embedded = emb.embedded;
    rep.details["critical_points"] = emb.critical_points;
    double worst = 0; // L = Im g identity
    for (int j = 0; j < s.grid.ny; ++j)
        for (int i = 0; i < s.grid.nx; ++i)
            worst = std::max(worst, std::abs(s.L(j, i) - s.G(j, i).imag()));
    rep.details["L_identity_residual"] = worst;
    return rep;
}

void write_domain_json(const DomainField& f, const VerifyReport& rep,
                       const std::optional<SpectralFit>& fit,
                       const std::filesystem::path& path) {
    json out;
    out["format"] = "serrin-domain/1";
    json meta;
    meta["n"] = f.n;
    meta["eta"] = f.params.eta;
    meta["tau"] = f.params.tau;
    meta["s"] = f.s;
    meta["s_star"] = f.s_star;
    meta["vartheta"] = f.vartheta;
    meta["a1"] = f.a1;
    meta["a2"] = f.a2;
    meta["b1"] = f.b1;
    meta["b2"] = f.b2;
    meta["q"] = f.q_hopf;
    out["meta"] = meta;
    out.update(grid_arrays(f.grid, f.G, f.v));
    out["verify"] = verify_to_json(rep);
    if (fit) out["mkdv"] = fit_to_json(*fit);
    atomic_write(path, out.dump(1));
}

void write_band_json(const BandSolution& s, const VerifyReport& rep,
                     const std::optional<SpectralFit>& fit, const std::filesystem::path& path) {
    json out;
    out["format"] = "serrin-band/1";
    json meta;
    meta["tau"] = s.tau;
    meta["x_star"] = s.x_star;
    meta["vartheta"] = s.vartheta;
    meta["b"] = s.b_boundary;
    meta["q"] = s.q_hopf;
    meta["period_shift"] = {s.period_shift.real(), s.period_shift.imag()};
    out["meta"] = meta;
    out.update(grid_arrays(s.grid, s.G, s.v));
    out["verify"] = verify_to_json(rep);
    if (fit) out["mkdv"] = fit_to_json(*fit);
    atomic_write(path, out.dump(1));
}

VerifyReport verify_file(const std::filesystem::path& json_path) {
    std::ifstream is(json_path);
    if (!is) throw FormatError("cannot open " + json_path.string());
    json in;
    try {
        is >> in;
    } catch (const std::exception& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
    std::string fmt = in.value("format", "");
    if (fmt != "serrin-domain/1" && fmt != "serrin-band/1")
        throw FormatError("unknown format: " + fmt);
    if (!in.contains("x") || !in.contains("y") || !in.contains("re_g") ||
        !in.contains("im_g") || !in.contains("v"))
        throw FormatError("missing sample arrays");
    auto xs = in["x"].get<std::vector<double>>();
    auto ys = in["y"].get<std::vector<double>>();
    GridSpec g;
    g.nx = int(xs.size());
    g.ny = int(ys.size());
    if (g.nx < 7 || g.ny < 7) throw FormatError("grid too small");
    g.x0 = xs.front();
    g.x1 = xs.back();
    g.y0 = ys.front();
    g.y1 = ys.back();
    auto re = matrix_from_json(in["re_g"]);
    auto im = matrix_from_json(in["im_g"]);
    auto v = matrix_from_json(in["v"]);
    if (re.rows() != g.ny || re.cols() != g.nx || im.rows() != g.ny || v.rows() != g.ny)
        throw FormatError("array shapes do not match the grid");
    Eigen::MatrixXcd G(g.ny, g.nx);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) G(j, i) = Complex(re(j, i), im(j, i));
    return verify_from_samples(g, G, v, nullptr);
}

// ------------------------- figures -------------------------

namespace {

struct SvgCanvas {
    std::ostringstream body;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;

    void bump(Complex w) {
        xmin = std::min(xmin, w.real());
        xmax = std::max(xmax, w.real());
        ymin = std::min(ymin, w.imag());
        ymax = std::max(ymax, w.imag());
    }
    void polyline(const std::vector<Complex>& pts, const char* cls, bool closed) {
        if (pts.size() < 2) return;
        body << "<path class=\"" << cls << "\" d=\"M";
        for (std::size_t k = 0; k < pts.size(); ++k) {
            bump(pts[k]);
            body << (k ? " L" : "") << pts[k].real() << ' ' << -pts[k].imag();
        }
        if (closed) body << " Z";
        body << "\"/>\n";
    }
    void circle(Complex c, double r, const char* cls) {
        bump(c + Complex(r, r));
        bump(c - Complex(r, r));
        body << "<circle class=\"" << cls << "\" cx=\"" << c.real() << "\" cy=\"" << -c.imag()
             << "\" r=\"" << r << "\"/>\n";
    }
    std::string finish() const {
        double w = xmax - xmin, h = ymax - ymin;
        double m = 0.05 * std::max(w, h);
        std::ostringstream os;
        os.precision(10);
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << xmin - m << ' '
           << -ymax - m << ' ' << w + 2 * m << ' ' << h + 2 * m << "\">\n"
           << "<style>\n"
           << ".boundary{fill:none;stroke:#13335b;stroke-width:" << 0.004 * (w + 2 * m)
           << ";}\n"
           << ".param{fill:none;stroke:#9db7d2;stroke-width:" << 0.0012 * (w + 2 * m) << ";}\n"
           << ".unit{fill:none;stroke:#c23b22;stroke-width:" << 0.0025 * (w + 2 * m)
           << ";stroke-dasharray:" << 0.01 * (w + 2 * m) << ";}\n"
           << "</style>\n"
           << body.str() << "</svg>\n";
        return os.str();
    }
};

} // namespace

void write_ring_svg(const DomainField& f, const std::filesystem::path& path) {
    SvgCanvas cv;
    const int m = 720;
    double T = 2.0 * f.n * f.vartheta;
    // parameter curves x = const
    for (int k = 1; k < 12; ++k) {
        double x = f.s + (f.s_star - f.s) * k / 12.0;
        std::vector<Complex> c;
        for (int j = 0; j <= m; ++j) c.push_back(f.dev->g(Complex(x, T * j / m)));
        cv.polyline(c, "param", true);
    }
    // parameter curves y = const
    for (int k = 0; k < 2 * f.n * 6; ++k) {
        double y = T * k / (2.0 * f.n * 6);
        std::vector<Complex> c;
        for (int i = 0; i <= 96; ++i)
            c.push_back(f.dev->g(Complex(f.s + (f.s_star - f.s) * i / 96.0, y)));
        cv.polyline(c, "param", false);
    }
    cv.circle(Complex(0, 0), 1.0, "unit");
    cv.polyline(f.boundary_curve(true, m), "boundary", true);
    cv.polyline(f.boundary_curve(false, m), "boundary", true);
    atomic_write(path, cv.finish());
}

void write_band_svg(const BandSolution& s, const std::filesystem::path& path, int periods,
                    bool rescaled) {
    SvgCanvas cv;
    const int m = 480;
    double mu = rescaled ? std::sqrt(s.tau) : 1.0;
    double T = 2.0 * s.vartheta;
    auto curve = [&](double x0, double yshift) {
        std::vector<Complex> c;
        for (int j = 0; j <= m * periods; ++j)
            c.push_back(mu * s.map->g(Complex(x0, yshift + T * periods * double(j) / (m * periods))));
        return c;
    };
    // parameter curves
    for (int k = 1; k < 8; ++k)
        cv.polyline(curve(-s.x_star + 2.0 * s.x_star * k / 8.0, 0.0), "param", false);
    for (int k = 0; k <= 6 * periods; ++k) {
        double y = T * periods * double(k) / (6 * periods);
        std::vector<Complex> c;
        for (int i = 0; i <= 64; ++i)
            c.push_back(mu * s.map->g(Complex(-s.x_star + 2.0 * s.x_star * i / 64.0, y)));
        cv.polyline(c, "param", false);
    }
    cv.polyline(curve(s.x_star, 0.0), "boundary", false);
    cv.polyline(curve(-s.x_star, 0.0), "boundary", false);
    atomic_write(path, cv.finish());
}

void write_necklace_svg(const NecklaceReport& r, const std::filesystem::path& path) {
    SvgCanvas cv;
    cv.circle(Complex(0, 0), 1.0, "unit");
    for (int k = 0; k < r.n; ++k) {
        Complex rot = std::exp(Complex(0, 2.0 * kPi * k / r.n));
        cv.circle(rot * r.center, r.radius, "boundary");
    }
    atomic_write(path, cv.finish());
}

void write_svg_from_json(const std::filesystem::path& json_path,
                         const std::filesystem::path& svg_path) {
    std::ifstream is(json_path);
    if (!is) throw FormatError("cannot open " + json_path.string());
    json in;
    is >> in;
    auto re = matrix_from_json(in.at("re_g"));
    auto im = matrix_from_json(in.at("im_g"));
    const long ny = re.rows(), nx = re.cols();
    SvgCanvas cv;
    auto col_curve = [&](long i) {
        std::vector<Complex> c;
        for (long j = 0; j < ny; ++j) c.push_back(Complex(re(j, i), im(j, i)));
        return c;
    };
    bool ring = in.value("format", "") == "serrin-domain/1";
    for (long i = nx / 8; i < nx - 1; i += std::max<long>(1, nx / 8))
        cv.polyline(col_curve(i), "param", ring);
    for (long j = 0; j < ny - 1; j += std::max<long>(1, ny / 18)) {
        std::vector<Complex> c;
        for (long i = 0; i < nx; ++i) c.push_back(Complex(re(j, i), im(j, i)));
        cv.polyline(c, "param", false);
    }
    if (ring) cv.circle(Complex(0, 0), 1.0, "unit");
    cv.polyline(col_curve(0), "boundary", ring);
    cv.polyline(col_curve(nx - 1), "boundary", ring);
    atomic_write(svg_path, cv.finish());
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    std::ostringstream os;
    os << "n,tau,eta,vartheta,theta_arc,h0,h1,s_mid,a1,a2,b1,b2,psi1,psi2,upsilon1_mark,"
          "upsilon2_mark,status\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (const auto& r : rows) {
        os << r.n << ',';
        put(r.tau);
        os << ',';
        put(r.eta);
        os << ',';
        put(r.vartheta);
        os << ',';
        put(r.theta_arc);
        os << ',';
        put(r.h0);
        os << ',';
        put(r.h1);
        os << ',';
        put(r.s_mid);
        os << ',';
        put(r.a1);
        os << ',';
        put(r.a2);
        os << ',';
        put(r.b1);
        os << ',';
        put(r.b2);
        os << ',';
        put(r.psi1);
        os << ',';
        put(r.psi2);
        os << ',' << (r.upsilon1_mark ? 1 : 0) << ',' << (r.upsilon2_mark ? 1 : 0) << ','
           << (r.ok ? "ok" : r.error) << '\n';
    }
    atomic_write(path, os.str());
}

} // namespace serrin
