#pragma once

#include "pureshapes/errors.hpp"
#include "pureshapes/numeric.hpp"
#include "pureshapes/radical.hpp"
#include "pureshapes/tuple.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

namespace pureshapes::fields {

enum class Ramification { wild, tame };

/// Canonical data of one pure prime degree field: the lexicographically
/// least tuple of its C_{p-1}-orbit plus everything derived from it.
struct PureField {
    SCTuple tuple;
    Int m;
    Ramification ramification = Ramification::wild;
    Int disc;
    std::vector<Int> b;        // b_j = prod a_i^floor(ij/p), j = 1..p-1
    std::optional<Int> eps;    // least positive with m*eps = 1 mod p^2 (tame only)
};

inline bool is_odd_prime(unsigned p) {
    if (p < 3 || p % 2 == 0) return false;
    for (unsigned d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

inline bool is_squarefree_u64(std::uint64_t n) {
    if (n == 0) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % (d * d) == 0) return false;
        while (n % d == 0) n /= d;
    }
    return true;
}

inline SCTuple validate(unsigned p, std::vector<std::uint64_t> a) {
    if (!is_odd_prime(p)) throw error("degree must be an odd prime");
    if (a.size() != p - 1)
        throw validation_error(validation_error::kind::bad_length,
                               "tuple must have length p-1");
    bool all_one = true;
    for (unsigned i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            throw validation_error(validation_error::kind::not_squarefree,
                                   "entries must be positive", static_cast<int>(i + 1));
        if (!is_squarefree_u64(a[i]))
            throw validation_error(validation_error::kind::not_squarefree,
                                   "a_" + std::to_string(i + 1) + " is not squarefree",
                                   static_cast<int>(i + 1));
        if (a[i] != 1) all_one = false;
    }
    for (unsigned i = 0; i < a.size(); ++i)
        for (unsigned j = i + 1; j < a.size(); ++j)
            if (std::gcd(a[i], a[j]) != 1)
                throw validation_error(validation_error::kind::not_coprime,
                                       "a_" + std::to_string(i + 1) + " and a_" +
                                           std::to_string(j + 1) + " share a factor",
                                       static_cast<int>(i + 1), static_cast<int>(j + 1));
    if (all_one)
        throw validation_error(validation_error::kind::degenerate_unit,
                               "m = 1 gives no field (x^p - 1 is reducible)");
    return SCTuple{p, std::move(a)};
}

/// Factors a p-th-power-free radicand m into its tuple: the primes with
/// valuation i make up a_i. Trial division up to `trial_bound`; one leftover
/// prime (or prime power below bound^2 per factor) is still handled.
inline SCTuple factor_radicand(unsigned p, Int m, std::uint64_t trial_bound = 1'000'000) {
    if (!is_odd_prime(p)) throw error("degree must be an odd prime");
    if (m < 2) throw error("radicand must be at least 2");
    std::vector<std::uint64_t> a(p - 1, 1);
    auto assign = [&](const Int& q, unsigned v) {
        if (v >= p) throw not_p_power_free("radicand has a p-th power factor");
        Int next = Int(a[v - 1]) * q;
        if (next > std::numeric_limits<std::uint64_t>::max() / 2)
            throw factorization_too_large("tuple entry exceeds 64-bit range");
        a[v - 1] = next.convert_to<std::uint64_t>();
    };
    for (Int d = 2; d * d <= m && d <= trial_bound; ++d) {
        if (m % d != 0) continue;
        unsigned v = 0;
        while (m % d == 0) { m /= d; ++v; }
        assign(d, v);
    }
    if (m > 1) {
        // leftover cofactor has no divisor <= trial_bound; peel a perfect
        // power if present, then the base is prime whenever it is below bound^2
        Int bound2 = Int(trial_bound) * trial_bound;
        unsigned v = 1;
        Int root = m;
        for (unsigned k = p; k >= 2; --k) {
            Int r;
            mpz_root(r.backend().data(), m.backend().data(), k);
            if (ipow(r, k) == m) { root = r; v = k; break; }
        }
        if (v >= p) throw not_p_power_free("radicand has a p-th power factor");
        if (root > bound2)
            throw factorization_too_large("unfactored cofactor above trial bound^2");
        assign(root, v);
    }
    return validate(p, std::move(a));
}

/// Tame iff p does not divide m and m^{p-1} = 1 mod p^2.
inline Ramification ramification_type(const SCTuple& t) {
    const Int p2 = Int(t.p) * t.p;
    Int m_mod = t.radicand() % p2;
    if (m_mod % t.p == 0) return Ramification::wild;
    Int r = boost::multiprecision::powm(m_mod, Int(t.p - 1), p2);
    return r == 1 ? Ramification::tame : Ramification::wild;
}

/// Delta_K = (-1)^{(p-1)/2} p^{p or p-2} prod a_i^{p-1}; the p-exponent is
/// p when wild, p-2 when tame.
inline Int discriminant(const SCTuple& t) {
    const unsigned p = t.p;
    unsigned pexp = ramification_type(t) == Ramification::wild ? p : p - 2;
    Int d = ipow(Int(p), pexp);
    for (auto v : t.a) d *= ipow(Int(v), p - 1);
    if (((p - 1) / 2) % 2 == 1) d = -d;
    return d;
}

/// Orbit of the C_{p-1} action: m -> m^k reduced p-th-power-free permutes
/// the tuple by a'_i = a_{i k^{-1} mod p}.
inline std::vector<SCTuple> orbit(const SCTuple& t) {
    const unsigned p = t.p;
    std::vector<SCTuple> out;
    for (unsigned k = 1; k < p; ++k) {
        // inverse of k mod p
        unsigned kinv = 1;
        for (unsigned c = 1; c < p; ++c)
            if (c * k % p == 1) { kinv = c; break; }
        SCTuple s{p, std::vector<std::uint64_t>(p - 1)};
        for (unsigned i = 1; i < p; ++i) s.a[i - 1] = t.a[(i * kinv) % p - 1];
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    return out;
}

inline std::vector<Int> basis_denominators(const SCTuple& t) {
    const unsigned p = t.p;
    std::vector<Int> b(p - 1, 1);
    for (unsigned j = 1; j < p; ++j)
        for (unsigned i = 1; i < p; ++i) b[j - 1] *= ipow(Int(t.a[i - 1]), (i * j) / p);
    return b;
}

inline Int least_positive_eps(const SCTuple& t) {
    const Int p2 = Int(t.p) * t.p;
    Int m_mod = t.radicand() % p2;
    for (Int e = 1; e < p2; ++e)
        if (m_mod * e % p2 == 1) return e;
    throw error("no unit inverse mod p^2 (radicand divisible by p)");
}

/// Field data for the tuple as presented (no orbit minimization); the shape
/// and discriminant are orbit invariants, the basis entries are not.
inline PureField from_tuple(const SCTuple& t) {
    PureField f;
    f.tuple = t;
    f.m = t.radicand();
    f.ramification = ramification_type(t);
    f.disc = discriminant(t);
    f.b = basis_denominators(t);
    if (f.ramification == Ramification::tame) f.eps = least_positive_eps(t);
    return f;
}

inline PureField canonicalize(const SCTuple& t) {
    auto orb = orbit(t);
    const SCTuple* least = &orb.front();
    for (const auto& s : orb)
        if (lex_less(s, *least)) least = &s;
    return from_tuple(*least);
}

/// gamma_j = alpha^j / b_j as a canonical monomial: exponent of a_i is ij mod p.
inline radical::RadicalMonomial gamma(const SCTuple& t, unsigned j) {
    std::vector<int> exps(t.p - 1);
    for (unsigned i = 1; i < t.p; ++i) exps[i - 1] = static_cast<int>((i * j) % t.p);
    return radical::RadicalMonomial{t, Rat(1), std::move(exps)};
}

/// alpha^j as a monomial (gamma_j scaled back up by b_j).
inline radical::RadicalMonomial alpha_power(const SCTuple& t, unsigned j) {
    std::vector<int> exps(t.p - 1);
    for (unsigned i = 1; i < t.p; ++i) exps[i - 1] = static_cast<int>(i * j);
    return radical::normalize(radical::RadicalMonomial{t, Rat(1), std::move(exps)});
}

/// nu = (m + alpha + eps alpha^2 + ... + eps^{p-2} alpha^{p-1}) / p
inline radical::RadicalSum tame_nu(const PureField& f) {
    const unsigned p = f.tuple.p;
    const Int eps = *f.eps;
    std::vector<radical::RadicalMonomial> terms;
    terms.push_back(radical::constant(f.tuple, Rat(f.m, Int(p))));
    Rat c(1, Int(p));
    for (unsigned j = 1; j < p; ++j) {
        auto aj = alpha_power(f.tuple, j);
        aj.coef *= c;
        terms.push_back(aj);
        c *= eps;
    }
    return radical::sum_of(f.tuple, std::move(terms));
}

/// Integral basis: {1, gamma_1, ..., gamma_{p-1}} when wild,
/// {1, nu, gamma_2, ..., gamma_{p-1}} when tame.
inline std::vector<radical::RadicalSum> integral_basis(const PureField& f) {
    const unsigned p = f.tuple.p;
    std::vector<radical::RadicalSum> basis;
    basis.push_back(radical::to_sum(radical::constant(f.tuple, Rat(1))));
    if (f.ramification == Ramification::wild) {
        for (unsigned j = 1; j < p; ++j)
            basis.push_back(radical::to_sum(gamma(f.tuple, j)));
    } else {
        basis.push_back(tame_nu(f));
        for (unsigned j = 2; j < p; ++j)
            basis.push_back(radical::to_sum(gamma(f.tuple, j)));
    }
    return basis;
}

} // namespace pureshapes::fields
