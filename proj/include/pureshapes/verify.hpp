#pragma once

#include "pureshapes/census.hpp"
#include "pureshapes/densities.hpp"
#include "pureshapes/determinants.hpp"
#include "pureshapes/fields.hpp"
#include "pureshapes/shapes.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace pureshapes::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

using fields::Ramification;

inline void check(std::vector<CheckResult>& out, std::string name, bool pass,
                  std::string detail = "") {
    out.push_back(CheckResult{std::move(name), pass, std::move(detail)});
}

inline std::vector<SCTuple> random_tuples(unsigned p, unsigned count, Ramification want,
                                          std::uint64_t max_entry, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(1, max_entry);
    std::vector<SCTuple> out;
    while (out.size() < count) {
        std::vector<std::uint64_t> a(p - 1, 1);
        std::uint64_t radical = 1;
        for (auto& v : a) {
            std::uint64_t c = pick(rng);
            if (fields::is_squarefree_u64(c) && std::gcd(c, radical) == 1) {
                v = c;
                radical *= c;
            }
        }
        if (radical == 1) continue;
        SCTuple t{p, a};
        if (fields::ramification_type(t) != want) continue;
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace detail

/// Determinant identities: jacobian vs Maillet vs analytic class number,
/// shadow determinants, the column-sum property and the reduction pipeline.
inline std::vector<CheckResult> verify_determinants() {
    namespace det = determinants;
    std::vector<CheckResult> out;

    const unsigned primes[] = {3, 5, 7, 11, 13, 17, 19, 23};
    bool id_ok = true, hm_ok = true;
    std::ostringstream id_detail;
    for (unsigned p : primes) {
        auto cn = det::maillet_class_number(p);
        Int expect = ipow(Int(2), p - 2) * ipow(Int(p), (p - 3) / 2) * cn.h_minus;
        Int got = abs(det::jacobian_det(p));
        if (got != expect) {
            id_ok = false;
            id_detail << " p=" << p << " got " << got << " want " << expect;
        }
        if (det::h_minus_analytic(p) != cn.h_minus) hm_ok = false;
    }
    detail::check(out, "|det J_p| = 2^(p-2) p^((p-3)/2) h_p^- for p <= 23", id_ok,
                  id_detail.str());
    detail::check(out, "Maillet h_p^- matches analytic character-sum route, p <= 23",
                  hm_ok);
    detail::check(out, "h_23^- = 3", det::maillet_class_number(23).h_minus == 3);

    bool shadow_ok = true;
    for (unsigned d = 2; d <= 32; d += 2)
        if (det::shadow_jacobian_det(d) != 2) shadow_ok = false;
    detail::check(out, "shadow jacobian determinant = 2 for even d <= 32", shadow_ok);

    bool col_ok = true;
    for (unsigned p : {3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u}) {
        auto m = det::jacobian_exponent_matrix(p);
        for (size_t c = 0; c < m.size(); ++c) {
            Int s = 0;
            for (size_t r = 0; r < m.size(); ++r) s += m[r][c];
            if (s != 1) col_ok = false;
        }
    }
    detail::check(out, "every column of C_p sums to 1, p <= 23", col_ok);

    bool pipe_ok = true;
    for (unsigned p : {3u, 5u, 7u, 11u, 13u}) {
        Int d0 = det::bareiss_det(det::jacobian_exponent_matrix(p));
        Int d1 = det::bareiss_det(det::cp_prime(p));
        Int d2 = det::bareiss_det(det::cp_double_prime(p));
        if (d0 != d1 || d1 != d2) pipe_ok = false;
        Int block = det::bareiss_det(det::lambda_block(p));
        if (abs(d0) != ipow(Int(2), (p - 1) / 2) * abs(block)) pipe_ok = false;
    }
    detail::check(out, "det C_p = det C_p' = det C_p'' = 2^l det(lambda block), p <= 13",
                  pipe_ok);
    return out;
}

/// Local density closed form against enumeration and the displayed expansions.
inline std::vector<CheckResult> verify_densities() {
    namespace den = densities;
    std::vector<CheckResult> out;

    bool brute_ok = true;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull})
        for (unsigned n : {2u, 4u, 6u})
            if (den::delta_q(q, n) != den::delta_q_bruteforce(q, n)) brute_ok = false;
    detail::check(out, "delta_q closed form = residue enumeration, q <= 7, n <= 6",
                  brute_ok);

    // (q-1)^n (q+n) expands to q^{n+1} - 3 q^{n-1} + 2 q^{n-2} for n=2 and
    // q^{n+1} - 10 q^{n-1} + 20 q^{n-2} - 15 q^{n-3} + 4 q^{n-4} for n=4
    auto expand = [&](unsigned n) {
        std::vector<Int> poly{1};  // coefficients of (q-1)^n, ascending degree
        for (unsigned k = 0; k < n; ++k) {
            std::vector<Int> next(poly.size() + 1, Int(0));
            for (size_t i = 0; i < poly.size(); ++i) {
                next[i + 1] += poly[i];
                next[i] -= poly[i];
            }
            poly = std::move(next);
        }
        std::vector<Int> full(poly.size() + 1, Int(0));
        for (size_t i = 0; i < poly.size(); ++i) {
            full[i + 1] += poly[i];          // * q
            full[i] += Int(n) * poly[i];     // * n
        }
        return full;  // coefficients of (q-1)^n (q+n)
    };
    auto c2 = expand(2);
    bool e2 = c2 == std::vector<Int>{Int(2), Int(-3), Int(0), Int(1)};
    auto c4 = expand(4);
    bool e4 = c4 == std::vector<Int>{Int(4), Int(-15), Int(20), Int(-10), Int(0), Int(1)};
    detail::check(out, "n=2 expansion is 1 - 3/q^2 + 2/q^3", e2);
    detail::check(out, "n=4 expansion is 1 - 10/q^2 + 20/q^3 - 15/q^4 + 4/q^5", e4);

    bool conv_ok = true;
    for (unsigned p : {3u, 5u}) {
        double v1 = den::euler_product(p, 1000).value;
        double v2 = den::euler_product(p, 2000).value;
        double budget = 0;
        for (auto q : den::primes_upto(2000))
            if (q > 1000) budget += double(p - 1) * (p - 1) / (double(q) * q);
        if (!(v2 <= v1 && v1 - v2 <= budget)) conv_ok = false;
    }
    detail::check(out, "Euler product decreasing with tail bounded by sum (p-1)^2/q^2",
                  conv_ok);
    return out;
}

/// Shape-parameter consistency, Gram determinants, measure dual route.
inline std::vector<CheckResult> verify_shapes() {
    std::vector<CheckResult> out;

    bool lemma_ok = true;
    for (unsigned p : {3u, 5u, 7u}) {
        census::enumerate_tuples(p, 500, [&](const SCTuple& t) {
            if (shapes::shape_params(t) != shapes::shape_params_from_basis(t))
                lemma_ok = false;
        });
    }
    detail::check(out,
                  "lambda_j^p from the exponent formula = basis route, prod a_i <= 500, "
                  "p in {3,5,7}",
                  lemma_ok);

    bool gram_ok = true;
    for (unsigned p : {3u, 5u, 7u}) {
        for (auto want : {detail::Ramification::wild, detail::Ramification::tame}) {
            auto tuples = detail::random_tuples(p, 12, want, 40, 0x9e3779b9u + p);
            for (const auto& t : tuples) {
                auto f = fields::canonicalize(t);
                auto g = shapes::integral_basis_gram(f);
                Real d = shapes::det_real(shapes::eval_matrix(g, 160), 160);
                Real expect = to_real(Int(abs(f.disc)));
                if (abs(d - expect) > expect * Real("1e-9")) gram_ok = false;
            }
        }
    }
    detail::check(out, "numeric det(integral-basis Gram) = |disc| to 1e-9, both types",
                  gram_ok);

    bool measure_ok = true;
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    for (unsigned ell = 1; ell <= 3; ++ell) {
        unsigned p = ell == 1 ? 3 : (ell == 2 ? 5 : 7);
        for (int it = 0; it < 40; ++it) {
            std::vector<Rat> bounds;
            double x = 1.0;
            for (unsigned k = 0; k <= ell; ++k) {
                x += u(rng) + 0.01;
                bounds.push_back(Rat(Int(std::llround(x * 1000)), Int(1000)));
            }
            auto w = shapes::make_window(p, bounds);
            double closed = shapes::measure_window(w);
            double quad = shapes::measure_window_quadrature(w, 1e-10);
            if (std::abs(closed - quad) > 1e-6 * std::max(1.0, std::abs(closed)))
                measure_ok = false;
        }
    }
    detail::check(out, "measure closed form matches adaptive quadrature, l in {1,2,3}",
                  measure_ok);
    return out;
}

inline std::vector<CheckResult> verify_all() {
    auto out = verify_determinants();
    auto d = verify_densities();
    auto s = verify_shapes();
    out.insert(out.end(), d.begin(), d.end());
    out.insert(out.end(), s.begin(), s.end());
    return out;
}

} // namespace pureshapes::verify
