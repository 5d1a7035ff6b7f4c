#pragma once

#include "pureshapes/errors.hpp"
#include "pureshapes/fields.hpp"
#include "pureshapes/numeric.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace pureshapes::determinants {

using IntMatrix = std::vector<std::vector<Int>>;

/// Fraction-free (Bareiss) determinant; every intermediate division is exact.
inline Int bareiss_det(IntMatrix m) {
    const size_t n = m.size();
    if (n == 0) return Int(1);
    Int sign = 1;
    Int prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t piv = k + 1;
            while (piv < n && m[piv][k] == 0) ++piv;
            if (piv == n) return Int(0);
            std::swap(m[piv], m[k]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

/// The l x l block of shape-parameter exponents: entry (j,i) is the
/// exponent of a_i/a_{p-i} in lambda_j^p, i.e. 2ij - p - 2p floor(ij/p).
inline IntMatrix lambda_block(unsigned p) {
    const unsigned ell = (p - 1) / 2;
    IntMatrix m(ell, std::vector<Int>(ell));
    for (unsigned j = 1; j <= ell; ++j)
        for (unsigned i = 1; i <= ell; ++i)
            m[j - 1][i - 1] = Int(2L * i * j - static_cast<long>(p) - 2L * p * ((i * j) / p));
    return m;
}

/// Exponent matrix of the change of variables (a_1..a_{p-1}) -> (x_1..x_{p-1}):
/// rows 1..l carry the lambda_j^p exponents (antisymmetric across i <-> p-i),
/// rows l+1..p-2 mark the products a_{i-l} a_{p-i+l}, and the last row is the
/// exponent vector of prod a_i / prod x_i.
inline IntMatrix jacobian_exponent_matrix(unsigned p) {
    if (!fields::is_odd_prime(p)) throw error("p must be an odd prime");
    const unsigned ell = (p - 1) / 2;
    const unsigned n = p - 1;
    IntMatrix m(n, std::vector<Int>(n, Int(0)));
    for (unsigned j = 1; j <= ell; ++j)
        for (unsigned i = 1; i <= ell; ++i) {
            Int e(2L * i * j - static_cast<long>(p) - 2L * p * ((i * j) / p));
            m[j - 1][i - 1] = e;
            m[j - 1][p - i - 1] = -e;
        }
    for (unsigned r = ell + 1; r <= p - 2; ++r) {
        m[r - 1][r - ell - 1] = 1;
        m[r - 1][p - (r - ell) - 1] = 1;
    }
    for (unsigned c = 0; c < n; ++c) {
        Int col_sum = 0;
        for (unsigned r = 0; r + 1 < n; ++r) col_sum += m[r][c];
        m[n - 1][c] = 1 - col_sum;
    }
    return m;
}

inline Int jacobian_det(unsigned p) { return bareiss_det(jacobian_exponent_matrix(p)); }

/// Row-reduction pipeline: C_p with the bottom row replaced by all ones
/// (valid because every column of C_p sums to 1).
inline IntMatrix cp_prime(unsigned p) {
    IntMatrix m = jacobian_exponent_matrix(p);
    for (auto& v : m.back()) v = 1;
    return m;
}

/// Second step: subtract column p-j from column j for j > l, which zeroes
/// the symmetric rows and doubles the antisymmetric block.
inline IntMatrix cp_double_prime(unsigned p) {
    IntMatrix m = cp_prime(p);
    const unsigned n = p - 1;
    const unsigned ell = (p - 1) / 2;
    for (unsigned j = ell + 1; j <= n; ++j)
        for (unsigned r = 0; r < n; ++r) m[r][j - 1] -= m[r][p - j - 1];
    return m;
}

/// Maillet determinant D_p = det(R(r s^{-1} mod p))_{1<=r,s<=l} and the minus
/// class number it encodes: |D_p| = p^{(p-3)/2} h_p^-.
struct ClassNumberData {
    unsigned p = 0;
    Int maillet_det;
    Int h_minus;
};

inline ClassNumberData maillet_class_number(unsigned p, unsigned bound = 199) {
    if (!fields::is_odd_prime(p)) throw error("p must be an odd prime");
    if (p > bound) throw error("p above configured Maillet bound");
    const unsigned ell = (p - 1) / 2;
    std::vector<unsigned> inv(p, 0);
    for (unsigned s = 1; s < p; ++s)
        for (unsigned c = 1; c < p; ++c)
            if (s * c % p == 1) { inv[s] = c; break; }
    IntMatrix m(ell, std::vector<Int>(ell));
    for (unsigned r = 1; r <= ell; ++r)
        for (unsigned s = 1; s <= ell; ++s) m[r - 1][s - 1] = Int(r * inv[s] % p);
    Int d = bareiss_det(std::move(m));
    Int denom = ipow(Int(p), (p - 3) / 2);
    Int h = abs(d) / denom;
    if (h * denom != abs(d))
        throw divisibility_failure("Maillet determinant not divisible by p^((p-3)/2)");
    return ClassNumberData{p, d, h};
}

/// Analytic route: h_p^- = 2p prod_{chi odd} (-B_{1,chi}/2) evaluated with
/// high-precision complex arithmetic over conjugate character pairs, then
/// rounded to the nearest integer.
inline Int h_minus_analytic(unsigned p, unsigned precision_bits = 256) {
    if (!fields::is_odd_prime(p)) throw error("p must be an odd prime");
    if (p > 199) throw error("p above analytic oracle bound");
    precision_guard guard(precision_bits);
    // index table for a primitive root g: a = g^ind[a] mod p
    unsigned g = 2;
    for (; g < p; ++g) {
        unsigned x = 1;
        bool primitive = true;
        for (unsigned k = 1; k + 1 < p; ++k) {
            x = static_cast<unsigned>((static_cast<std::uint64_t>(x) * g) % p);
            if (x == 1) { primitive = false; break; }
        }
        if (primitive) break;
    }
    std::vector<unsigned> ind(p, 0);
    {
        unsigned x = 1;
        for (unsigned k = 0; k + 1 < p; ++k) {
            ind[x] = k;
            x = static_cast<unsigned>((static_cast<std::uint64_t>(x) * g) % p);
        }
    }
    const unsigned order = p - 1;
    const Real two_pi = 2 * acos(Real(-1));
    std::vector<Real> cos_tab(order), sin_tab(order);
    for (unsigned k = 0; k < order; ++k) {
        Real theta = two_pi * k / order;
        cos_tab[k] = cos(theta);
        sin_tab[k] = sin(theta);
    }
    // chi_j is odd exactly for odd j; characters j and p-1-j are conjugate
    Real prod_re = 1, prod_im = 0;
    for (unsigned j = 1; j < order; j += 2) {
        Real b_re = 0, b_im = 0;
        for (unsigned a = 1; a < p; ++a) {
            unsigned k = static_cast<unsigned>((static_cast<std::uint64_t>(j) * ind[a]) % order);
            b_re += Real(a) * cos_tab[k];
            b_im += Real(a) * sin_tab[k];
        }
        // factor -B_{1,chi}/2 with B = (sum)/p
        Real f_re = -b_re / (2 * static_cast<int>(p));
        Real f_im = -b_im / (2 * static_cast<int>(p));
        Real t_re = prod_re * f_re - prod_im * f_im;
        Real t_im = prod_re * f_im + prod_im * f_re;
        prod_re = t_re;
        prod_im = t_im;
    }
    Real value = 2 * static_cast<int>(p) * prod_re;
    Real rounded = round(value);
    if (abs(value - rounded) > Real("1e-6") || abs(2 * static_cast<int>(p) * prod_im) > Real("1e-6"))
        throw precision_loss("analytic class number did not round cleanly");
    return rounded.convert_to<Int>();
}

/// Recursive coefficient matrix of the even-dimensional shadow change of
/// variables; its determinant is 2 for every even d.
inline IntMatrix shadow_matrix(unsigned d) {
    if (d < 2 || d % 2 != 0) throw error("shadow dimension must be even and >= 2");
    if (d == 2) return IntMatrix{{Int(1), Int(-1)}, {Int(0), Int(2)}};
    IntMatrix inner = shadow_matrix(d - 2);
    IntMatrix m(d, std::vector<Int>(d, Int(0)));
    m[0][0] = 1;
    m[0][1] = -1;
    m[1][0] = 1;
    for (unsigned i = 0; i < d - 2; ++i)
        for (unsigned j = 0; j < d - 2; ++j) m[i + 2][j + 2] = inner[i][j];
    m[d - 1][0] = -1;
    m[d - 1][1] = 2;
    return m;
}

inline Int shadow_jacobian_det(unsigned d) {
    if (d > 64) throw error("shadow dimension above supported range");
    return bareiss_det(shadow_matrix(d));
}

/// The odd-composite variant of the lambda block; no nonvanishing claim.
inline IntMatrix composite_lambda_block(unsigned n) {
    const unsigned ell = (n - 1) / 2;
    IntMatrix m(ell, std::vector<Int>(ell));
    for (unsigned i = 1; i <= ell; ++i)
        for (unsigned j = 1; j <= ell; ++j) {
            long v = 2L * i * j - static_cast<long>(n) * j -
                     static_cast<long>(n) * ((i * j) / n) +
                     static_cast<long>(n) * (((n - i) * j) / n);
            m[i - 1][j - 1] = Int(v);
        }
    return m;
}

inline Int composite_jacobian_det(unsigned n) {
    if (n < 9 || n % 2 == 0 || fields::is_odd_prime(n))
        throw error("n must be an odd composite >= 9");
    const unsigned ell = (n - 1) / 2;
    return ipow(Int(2), ell) * bareiss_det(composite_lambda_block(n));
}

} // namespace pureshapes::determinants
