#pragma once

#include "pureshapes/errors.hpp"
#include "pureshapes/numeric.hpp"
#include "pureshapes/tuple.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <vector>

namespace pureshapes::radical {

/// One term coef * prod a_i^{exps[i]/p} over the radicand generators a_i of
/// a fixed tuple. Canonical form keeps 0 <= exps[i] < p by folding whole
/// powers of a_i into the rational coefficient, so the p-th power of any
/// monomial is an exact rational.
struct RadicalMonomial {
    SCTuple base;
    Rat coef = 0;
    std::vector<int> exps;  // length p-1, exponent numerators over p
};

inline RadicalMonomial make_monomial(const SCTuple& base, Rat coef, std::vector<int> exps) {
    return RadicalMonomial{base, std::move(coef), std::move(exps)};
}

inline RadicalMonomial constant(const SCTuple& base, Rat value) {
    return RadicalMonomial{base, std::move(value), std::vector<int>(base.p - 1, 0)};
}

inline RadicalMonomial normalize(RadicalMonomial x) {
    const int p = static_cast<int>(x.base.p);
    for (unsigned i = 0; i < x.exps.size(); ++i) {
        int e = x.exps[i];
        // floor division so negative exponents land in [0, p) as well
        int q = e >= 0 ? e / p : -((-e + p - 1) / p);
        if (q != 0) {
            x.exps[i] = e - q * p;
            x.coef *= rpow(Rat(Int(x.base.a[i])), q);
        }
    }
    if (x.coef == 0) std::fill(x.exps.begin(), x.exps.end(), 0);
    return x;
}

inline bool is_zero(const RadicalMonomial& x) { return x.coef == 0; }

inline RadicalMonomial mul(const RadicalMonomial& x, const RadicalMonomial& y) {
    if (x.base != y.base)
        throw base_mismatch("radical monomials over different radicand tuples");
    RadicalMonomial r;
    r.base = x.base;
    r.coef = x.coef * y.coef;
    r.exps.resize(x.exps.size());
    for (unsigned i = 0; i < x.exps.size(); ++i) r.exps[i] = x.exps[i] + y.exps[i];
    return normalize(std::move(r));
}

/// Exact rational value of x^p. Requires canonical exponents.
inline Rat pth_power(const RadicalMonomial& x) {
    RadicalMonomial c = normalize(x);
    Rat r = rpow(c.coef, static_cast<long>(c.base.p));
    for (unsigned i = 0; i < c.exps.size(); ++i) r *= rpow(Rat(Int(c.base.a[i])), c.exps[i]);
    return r;
}

/// Exact order of two positive monomials, decided on their rational p-th powers.
inline std::strong_ordering cmp(const RadicalMonomial& x, const RadicalMonomial& y) {
    if (x.base != y.base)
        throw base_mismatch("radical monomials over different radicand tuples");
    if (x.coef <= 0 || y.coef <= 0)
        throw nonpositive_value("cmp requires positive monomials");
    Rat xp = pth_power(x), yp = pth_power(y);
    if (xp < yp) return std::strong_ordering::less;
    if (xp > yp) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

/// Value within relative error 2^(1-bits); deterministic for fixed bits.
inline Real eval(const RadicalMonomial& x, unsigned bits = 53) {
    if (bits < 24) throw error("eval: precision below 24 bits");
    precision_guard guard(bits + 32);
    RadicalMonomial c = normalize(x);
    if (c.coef == 0) return Real(0);
    Int radic = 1;
    for (unsigned i = 0; i < c.exps.size(); ++i) radic *= ipow(Int(c.base.a[i]), c.exps[i]);
    Real root = pow(to_real(radic), Real(1) / c.base.p);
    return to_real(c.coef) * root;
}

/// Finite sum of monomials over one base; normal form merges equal exponent
/// vectors and drops zero terms, so the zero sum is the empty sum and exact
/// equality is term-by-term.
struct RadicalSum {
    SCTuple base;
    std::vector<RadicalMonomial> terms;
};

inline RadicalSum normalized(RadicalSum s) {
    std::map<std::vector<int>, Rat> acc;
    for (auto& t : s.terms) {
        if (t.base != s.base)
            throw base_mismatch("radical sum over mixed radicand tuples");
        RadicalMonomial c = normalize(std::move(t));
        if (c.coef != 0) acc[c.exps] += c.coef;
    }
    RadicalSum r;
    r.base = s.base;
    for (auto& [e, c] : acc)
        if (c != 0) r.terms.push_back(RadicalMonomial{s.base, c, e});
    return r;
}

inline RadicalSum sum_of(const SCTuple& base, std::vector<RadicalMonomial> terms) {
    return normalized(RadicalSum{base, std::move(terms)});
}

inline RadicalSum zero_sum(const SCTuple& base) { return RadicalSum{base, {}}; }

inline RadicalSum to_sum(const RadicalMonomial& m) {
    return sum_of(m.base, {m});
}

inline bool is_zero(const RadicalSum& s) { return s.terms.empty(); }

inline RadicalSum add(const RadicalSum& x, const RadicalSum& y) {
    if (x.base != y.base) throw base_mismatch("adding sums over different tuples");
    RadicalSum r{x.base, x.terms};
    r.terms.insert(r.terms.end(), y.terms.begin(), y.terms.end());
    return normalized(std::move(r));
}

inline RadicalSum scale(const RadicalSum& x, const Rat& c) {
    RadicalSum r = x;
    for (auto& t : r.terms) t.coef *= c;
    return normalized(std::move(r));
}

inline RadicalSum sub(const RadicalSum& x, const RadicalSum& y) {
    return add(x, scale(y, Rat(-1)));
}

inline RadicalSum mul(const RadicalSum& x, const RadicalSum& y) {
    if (x.base != y.base) throw base_mismatch("multiplying sums over different tuples");
    RadicalSum r{x.base, {}};
    for (const auto& tx : x.terms)
        for (const auto& ty : y.terms) r.terms.push_back(mul(tx, ty));
    return normalized(std::move(r));
}

inline bool equal(const RadicalSum& x, const RadicalSum& y) {
    return is_zero(sub(x, y));
}

inline Real eval(const RadicalSum& s, unsigned bits = 53) {
    if (bits < 24) throw error("eval: precision below 24 bits");
    precision_guard guard(bits + 32);
    Real acc = 0;
    for (const auto& t : s.terms) acc += eval(t, bits + 32);
    return acc;
}

/// The sum is a plain rational iff every surviving term has trivial exponents.
inline bool is_rational(const RadicalSum& s, Rat* value = nullptr) {
    Rat v = 0;
    for (const auto& t : s.terms) {
        for (int e : t.exps)
            if (e != 0) return false;
        v += t.coef;
    }
    if (value) *value = v;
    return true;
}

} // namespace pureshapes::radical
