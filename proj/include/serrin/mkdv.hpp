#pragma once

#include "serrin/jet.hpp"
#include "serrin/types.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <map>
#include <vector>

namespace serrin {

using Rational = boost::multiprecision::cpp_rational;

struct RecursionIntegrityError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Differential polynomial in the jet variables u_0, ..., u_K (u_k standing
/// for the k-th derivative of the potential) with exact rational
/// coefficients. Monomial keys are exponent vectors with trailing zeros
/// trimmed.
class DiffPoly {
  public:
    using Exp = std::vector<unsigned short>;

    DiffPoly() = default;
    static DiffPoly variable(int k);
    static DiffPoly constant(Rational c);

    bool empty() const { return terms_.empty(); }
    const std::map<Exp, Rational>& terms() const { return terms_; }

    DiffPoly operator+(const DiffPoly& o) const;
    DiffPoly operator-(const DiffPoly& o) const;
    DiffPoly operator*(const DiffPoly& o) const;
    DiffPoly operator*(const Rational& c) const;

    /// total derivative: D(u_k) = u_{k+1}
    DiffPoly total_derivative() const;

    /// KdV weight (weight of u_k is k+1); throws unless homogeneous.
    int weight() const;
    bool is_homogeneous(int* w = nullptr) const;

    /// evaluation at a jet of derivative values (jet[k] = value of u_k)
    Complex eval(const std::vector<Complex>& jet) const;

    /// highest variable index used
    int max_var() const;

  private:
    void add(const Exp& e, const Rational& c);
    std::map<Exp, Rational> terms_;
};

/// The n-th recursion operator of the homogeneous hierarchy (Q_0 = u_0,
/// Q_1 = u_2 - 2 u_0^3, ...), built by formal integration of the recursion
/// and cached. Practical cap n <= 8.
const DiffPoly& mkdv_operator(int n);

/// Evaluate Q_n at a jet of derivative values (length >= 2n+1).
Complex evaluate_q(int n, const std::vector<Complex>& jet);

/// Where the jets come from and where to sample them.
struct JetSampler {
    std::function<Jet(Complex, int)> jet_at; // Taylor jet of eta at z
    std::vector<Complex> points;

    /// derivative values of eta at z up to order `order`
    std::vector<Complex> derivs(Complex z, int order) const {
        return jet_at(z, order).derivatives();
    }
};

struct SpectralFit {
    int m = 0;
    double a0 = 0;
    std::vector<double> c;
    double residual = 0; // relative L2
    int grid_points = 0;
    bool degenerate = false; // rank-deficient normal equations
};

/// Real least-squares fit of Q_m[eta] = a0 + sum c_j Q_j[eta] over the
/// sample set (complex equations, real unknowns).
SpectralFit spectral_fit(const JetSampler& src, int m);

struct GenusResult {
    int genus = -1;       // smallest passing m; -1 when none passed
    bool exceeded = false; // genus > m_max (a legitimate outcome)
    double h_relation_residual = 0;
    std::vector<SpectralFit> fits;
};

/// Smallest m <= m_max with fit residual below `threshold`, cross-checked
/// against the h-level relation h_m = sum c_j h_j (imaginary parts).
GenusResult genus_classify(const JetSampler& src, int m_max = 3, double threshold = 1e-6);

/// Robin-condition residual of the conformal Jacobi field h_n = Im Q_n[eta]
/// on a constructed domain, normalized by max |h_n|.
struct JacobiCheck {
    double robin_residual[2] = {0, 0}; // per boundary component
    double hmax = 0;
    bool dirichlet_variant = false; // used when a capillarity constant vanishes
};

class DevelopingMap; // ring
struct DomainField;
struct BandSolution;

JacobiCheck jacobi_field_check(const DomainField& field, int n);
JacobiCheck jacobi_field_check(const BandSolution& sol, int n);

JetSampler sampler_for(const DomainField& field, int nx = 24, int ny = 24);
JetSampler sampler_for(const BandSolution& sol, int nx = 24, int ny = 24);

} // namespace serrin
