#pragma once

#include "pureshapes/errors.hpp"
#include "pureshapes/fields.hpp"
#include "pureshapes/numeric.hpp"
#include "pureshapes/radical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace pureshapes::shapes {

using fields::PureField;
using fields::Ramification;
using radical::RadicalSum;

/// Symmetric matrix of exact radical sums; Gram matrices of the integral
/// basis and of the projected basis are stored here.
struct GramMatrix {
    unsigned n = 0;
    SCTuple base;
    std::vector<RadicalSum> entries;  // row-major, n*n

    const RadicalSum& at(unsigned i, unsigned j) const { return entries[i * n + j]; }
    RadicalSum& at(unsigned i, unsigned j) { return entries[i * n + j]; }
};

using RatMatrix = std::vector<std::vector<Rat>>;

/// Gram of the rational basis {1, gamma_1, ..., gamma_{p-1}} under the
/// Hermitian Minkowski pairing: diag(p, p gamma_1^2, ..., p gamma_{p-1}^2).
inline GramMatrix gram_wild(const PureField& f) {
    const unsigned p = f.tuple.p;
    GramMatrix g{p, f.tuple, std::vector<RadicalSum>(p * p, radical::zero_sum(f.tuple))};
    g.at(0, 0) = radical::to_sum(radical::constant(f.tuple, Rat(Int(p))));
    for (unsigned j = 1; j < p; ++j) {
        auto gj = fields::gamma(f.tuple, j);
        auto sq = radical::mul(gj, gj);
        sq.coef *= Int(p);
        g.at(j, j) = radical::to_sum(sq);
    }
    return g;
}

/// Change of basis from {1, gamma_1, gamma_2, ...} to {1, nu, gamma_2, ...}:
/// row 2 is (m/p, 1/p, eps b_2/p, ..., eps^{p-2} b_{p-1}/p), rest identity.
inline RatMatrix conjugation_matrix(const PureField& f) {
    if (f.ramification != Ramification::tame)
        throw wrong_type("conjugation matrix is defined for tame fields");
    const unsigned p = f.tuple.p;
    RatMatrix c(p, std::vector<Rat>(p, Rat(0)));
    for (unsigned i = 0; i < p; ++i) c[i][i] = 1;
    const Int eps = *f.eps;
    c[1][0] = Rat(f.m, Int(p));
    c[1][1] = Rat(1, Int(p));
    Rat e(1);
    for (unsigned j = 2; j < p; ++j) {
        e *= eps;
        c[1][j] = e * Rat(f.b[j - 1], Int(p));
    }
    return c;
}

inline Rat rat_det(RatMatrix m) {
    const size_t n = m.size();
    Rat det = 1;
    for (size_t k = 0; k < n; ++k) {
        size_t piv = k;
        while (piv < n && m[piv][k] == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != k) { std::swap(m[piv], m[k]); det = -det; }
        det *= m[k][k];
        for (size_t i = k + 1; i < n; ++i) {
            if (m[i][k] == 0) continue;
            Rat f = m[i][k] / m[k][k];
            for (size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return det;
}

/// Gram of the tame integral basis, computed as C_t G(K) C_t^T exactly.
inline GramMatrix gram_tame(const PureField& f) {
    if (f.ramification != Ramification::tame)
        throw wrong_type("gram_tame requires a tamely ramified field");
    const unsigned p = f.tuple.p;
    GramMatrix g = gram_wild(f);
    RatMatrix c = conjugation_matrix(f);
    // t = C * G
    GramMatrix t{p, f.tuple, std::vector<RadicalSum>(p * p, radical::zero_sum(f.tuple))};
    for (unsigned i = 0; i < p; ++i)
        for (unsigned j = 0; j < p; ++j) {
            RadicalSum acc = radical::zero_sum(f.tuple);
            for (unsigned k = 0; k < p; ++k) {
                if (c[i][k] == 0) continue;
                acc = radical::add(acc, radical::scale(g.at(k, j), c[i][k]));
            }
            t.at(i, j) = std::move(acc);
        }
    // out = t * C^T
    GramMatrix out{p, f.tuple, std::vector<RadicalSum>(p * p, radical::zero_sum(f.tuple))};
    for (unsigned i = 0; i < p; ++i)
        for (unsigned j = 0; j < p; ++j) {
            RadicalSum acc = radical::zero_sum(f.tuple);
            for (unsigned k = 0; k < p; ++k) {
                if (c[j][k] == 0) continue;
                acc = radical::add(acc, radical::scale(t.at(i, k), c[j][k]));
            }
            out.at(i, j) = std::move(acc);
        }
    return out;
}

inline GramMatrix integral_basis_gram(const PureField& f) {
    return f.ramification == Ramification::wild ? gram_wild(f) : gram_tame(f);
}

/// Gram of j(O_K^perp): project each basis vector v (other than 1) to
/// v - (<v, 1>/p) 1 and pair. Wild fields are reported in the scaled
/// representative diag(gamma_j^2); tame fields keep the projected entries.
inline GramMatrix shape_gram(const PureField& f) {
    const unsigned p = f.tuple.p;
    GramMatrix g = integral_basis_gram(f);
    GramMatrix out{p - 1, f.tuple,
                   std::vector<RadicalSum>((p - 1) * (p - 1), radical::zero_sum(f.tuple))};
    const Rat inv_p(1, Int(p));
    for (unsigned i = 1; i < p; ++i)
        for (unsigned j = 1; j < p; ++j) {
            RadicalSum cross = radical::mul(g.at(i, 0), g.at(j, 0));
            out.at(i - 1, j - 1) = radical::sub(g.at(i, j), radical::scale(cross, inv_p));
        }
    if (f.ramification == Ramification::wild)
        for (auto& e : out.entries) e = radical::scale(e, inv_p);
    return out;
}

/// Canonical shape: the p-th powers of mu_i = max(lambda_i, 1/lambda_i),
/// exact rationals >= 1, sorted ascending. A complete invariant of the
/// field together with the ramification type.
struct ShapeVector {
    unsigned p = 0;
    std::vector<Rat> lambdas_p;  // length (p-1)/2

    bool operator==(const ShapeVector&) const = default;
    bool operator<(const ShapeVector& o) const { return lambdas_p < o.lambdas_p; }
};

/// lambda_j^p = prod_i (a_i / a_{p-i})^(2ij - p - 2p floor(ij/p)), folded and sorted.
inline ShapeVector shape_params(const SCTuple& t) {
    const unsigned p = t.p;
    const unsigned ell = t.ell();
    ShapeVector s{p, {}};
    for (unsigned j = 1; j <= ell; ++j) {
        Rat v(1);
        for (unsigned i = 1; i <= ell; ++i) {
            long e = 2L * i * j - static_cast<long>(p) - 2L * p * ((i * j) / p);
            v *= rpow(Rat(Int(t.a[i - 1]), Int(t.a[p - i - 1])), e);
        }
        if (v < 1) v = Rat(denominator(v), numerator(v));
        s.lambdas_p.push_back(std::move(v));
    }
    std::sort(s.lambdas_p.begin(), s.lambdas_p.end());
    return s;
}

inline ShapeVector shape_params(const PureField& f) { return shape_params(f.tuple); }

/// Same parameters from the definition lambda_j = gamma_j^2/(gamma_l gamma_{l+1});
/// kept as an independent route for the consistency checks.
inline ShapeVector shape_params_from_basis(const SCTuple& t) {
    const unsigned p = t.p;
    const unsigned ell = t.ell();
    auto denom = radical::mul(fields::gamma(t, ell), fields::gamma(t, ell + 1));
    Rat denom_p = radical::pth_power(denom);
    ShapeVector s{p, {}};
    for (unsigned j = 1; j <= ell; ++j) {
        auto gj = fields::gamma(t, j);
        Rat v = radical::pth_power(radical::mul(gj, gj)) / denom_p;
        if (v < 1) v = Rat(denominator(v), numerator(v));
        s.lambdas_p.push_back(std::move(v));
    }
    std::sort(s.lambdas_p.begin(), s.lambdas_p.end());
    return s;
}

/// Shapes are equal iff the fields have the same ramification type (the two
/// types occupy different subspaces) and identical canonical parameters.
inline bool shapes_equal(const PureField& f, const PureField& g) {
    if (f.tuple.p != g.tuple.p)
        throw prime_mismatch("comparing shapes of different degrees");
    if (f.ramification != g.ramification) return false;
    return shape_params(f) == shape_params(g);
}

/// Window R_1 <= x_1 < x_2 < ... < x_l <= R_{l+1}, x_i > R_i, on the
/// lambda^p scale. The last bound may be dropped (unbounded window).
struct ShapeWindow {
    unsigned p = 0;
    std::vector<Rat> bounds;  // R_1..R_{l+1}, or R_1..R_l when unbounded
    bool unbounded = false;

    unsigned ell() const { return (p - 1) / 2; }
};

inline ShapeWindow make_window(unsigned p, std::vector<Rat> bounds, bool unbounded = false) {
    if (!fields::is_odd_prime(p)) throw invalid_window("window degree must be an odd prime");
    const unsigned ell = (p - 1) / 2;
    const size_t expect = unbounded ? ell : ell + 1;
    if (bounds.size() != expect)
        throw invalid_window("window needs " + std::to_string(expect) + " bounds for p=" +
                             std::to_string(p));
    if (bounds.front() < 1) throw invalid_window("window bounds start at 1");
    for (size_t i = 0; i + 1 < bounds.size(); ++i)
        if (!(bounds[i] < bounds[i + 1]))
            throw invalid_window("window bounds must increase strictly");
    return ShapeWindow{p, std::move(bounds), unbounded};
}

inline bool window_contains(const ShapeWindow& w, const ShapeVector& s) {
    if (w.p != s.p) throw prime_mismatch("window and shape have different degrees");
    const unsigned ell = w.ell();
    if (s.lambdas_p.size() != ell) throw prime_mismatch("shape has wrong parameter count");
    if (s.lambdas_p.front() < w.bounds.front()) return false;          // R_1 <= x_1
    for (unsigned i = 0; i + 1 < ell; ++i)
        if (!(s.lambdas_p[i] < s.lambdas_p[i + 1])) return false;      // strict chain
    for (unsigned i = 1; i < ell; ++i)
        if (!(s.lambdas_p[i] > w.bounds[i])) return false;             // inner strict
    if (!w.unbounded && s.lambdas_p.back() > w.bounds[ell]) return false;  // x_l <= R_{l+1}
    return true;
}

namespace detail {

// polynomial in u with double coefficients, ascending powers
using Poly = std::vector<double>;

inline double poly_eval(const Poly& f, double u) {
    double acc = 0;
    for (size_t i = f.size(); i-- > 0;) acc = acc * u + f[i];
    return acc;
}

inline Poly poly_antiderivative(const Poly& f) {
    Poly g(f.size() + 1, 0.0);
    for (size_t i = 0; i < f.size(); ++i) g[i + 1] = f[i] / static_cast<double>(i + 1);
    return g;
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double eps,
                               int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
    if (!(b > a)) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double eps = rel_tol * std::max(std::abs(whole), 1e-12);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, eps, 40);
}

} // namespace detail

/// Measure of the window under prod dx_i/x_i. In log coordinates the
/// iterated integral of 1 is a polynomial, built here exactly by repeated
/// antidifferentiation, so every l has a closed form.
inline double measure_window(const ShapeWindow& w) {
    if (w.unbounded) throw invalid_window("unbounded window has infinite measure");
    const unsigned ell = w.ell();
    std::vector<double> r(w.bounds.size());
    for (size_t i = 0; i < w.bounds.size(); ++i) r[i] = std::log(to_double(w.bounds[i]));
    detail::Poly f{1.0};  // F_0 = 1
    for (unsigned k = 1; k < ell; ++k) {
        detail::Poly g = detail::poly_antiderivative(f);
        double at_rk = detail::poly_eval(g, r[k - 1]);
        g[0] -= at_rk;  // F_k(u) = G(u) - G(r_k)
        f = std::move(g);
    }
    detail::Poly g = detail::poly_antiderivative(f);
    return detail::poly_eval(g, r[ell]) - detail::poly_eval(g, r[ell - 1]);
}

/// Independent route: recursive adaptive quadrature in the original
/// coordinates, one numeric integration per level.
inline double measure_window_quadrature(const ShapeWindow& w, double rel_tol = 1e-12) {
    if (w.unbounded) throw invalid_window("unbounded window has infinite measure");
    const unsigned ell = w.ell();
    std::vector<double> R(w.bounds.size());
    for (size_t i = 0; i < w.bounds.size(); ++i) R[i] = to_double(w.bounds[i]);
    std::function<double(unsigned, double)> level = [&](unsigned k, double hi) -> double {
        if (k == 0) return 1.0;
        double lo = R[k - 1];
        return detail::integrate([&](double x) { return level(k - 1, x) / x; }, lo, hi,
                                 rel_tol);
    };
    return level(ell, R[ell]);
}

// --- numeric matrix helpers (evaluation, determinant, definiteness) ---

inline std::vector<std::vector<Real>> eval_matrix(const GramMatrix& g, unsigned bits = 128) {
    precision_guard guard(bits + 32);
    std::vector<std::vector<Real>> m(g.n, std::vector<Real>(g.n));
    for (unsigned i = 0; i < g.n; ++i)
        for (unsigned j = 0; j < g.n; ++j) m[i][j] = radical::eval(g.at(i, j), bits);
    return m;
}

inline Real det_real(std::vector<std::vector<Real>> m, unsigned bits = 128) {
    precision_guard guard(bits + 32);
    const size_t n = m.size();
    Real det = 1;
    for (size_t k = 0; k < n; ++k) {
        size_t piv = k;
        for (size_t i = k + 1; i < n; ++i)
            if (abs(m[i][k]) > abs(m[piv][k])) piv = i;
        if (m[piv][k] == 0) return Real(0);
        if (piv != k) { std::swap(m[piv], m[k]); det = -det; }
        det *= m[k][k];
        for (size_t i = k + 1; i < n; ++i) {
            Real f = m[i][k] / m[k][k];
            for (size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return det;
}

inline bool is_positive_definite(const GramMatrix& g, unsigned bits = 64) {
    precision_guard guard(bits + 32);
    auto m = eval_matrix(g, bits);
    const size_t n = m.size();
    // Cholesky; fails on a nonpositive pivot
    for (size_t k = 0; k < n; ++k) {
        for (size_t j = 0; j < k; ++j) m[k][k] -= m[k][j] * m[k][j];
        if (m[k][k] <= 0) return false;
        m[k][k] = sqrt(m[k][k]);
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = 0; j < k; ++j) m[i][k] -= m[i][j] * m[k][j];
            m[i][k] /= m[k][k];
        }
    }
    return true;
}

} // namespace pureshapes::shapes
