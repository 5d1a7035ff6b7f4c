#pragma once

#include "pureshapes/determinants.hpp"
#include "pureshapes/errors.hpp"
#include "pureshapes/numeric.hpp"

#include <cstdint>
#include <vector>

namespace pureshapes::densities {

/// Local density of the strongly carefree condition at q for n-tuples:
/// the fraction of residue tuples mod q^2 with no entry 0 mod q^2 and at
/// most one entry 0 mod q.
struct LocalDensity {
    std::uint64_t q = 0;
    unsigned n = 0;
    Rat value;
};

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline Rat delta_q(std::uint64_t q, unsigned n) {
    if (!is_prime_u64(q)) throw error("q must be prime");
    if (n < 2) throw error("tuple length must be at least 2");
    Int qm1 = Int(q) - 1;
    return Rat(ipow(qm1, n) * (Int(q) + n), ipow(Int(q), n + 1));
}

inline LocalDensity local_density(std::uint64_t q, unsigned n) {
    return LocalDensity{q, n, delta_q(q, n)};
}

/// Enumeration oracle: walks all q^2 residues of each coordinate, classifying
/// each by actual modular arithmetic, and combines coordinates with an exact
/// zero-count automaton (none / one / too many). Independent of the closed
/// formula; exact for every q <= 13, n <= 6.
inline Rat delta_q_bruteforce(std::uint64_t q, unsigned n) {
    if (!is_prime_u64(q) || q > 13) throw too_large("brute force limited to primes q <= 13");
    if (n < 2 || n > 6) throw too_large("brute force limited to 2 <= n <= 6");
    const std::uint64_t q2 = q * q;
    std::uint64_t unit = 0, single = 0;  // residues with v_q = 0 resp. v_q = 1
    for (std::uint64_t r = 0; r < q2; ++r) {
        if (r % q2 == 0) continue;       // excluded: 0 mod q^2
        if (r % q == 0) ++single;
        else ++unit;
    }
    // states: number of coordinates divisible by q (0 or 1; >=2 is dead)
    Int zero_zeros = 1, one_zero = 0;
    for (unsigned i = 0; i < n; ++i) {
        Int nz = zero_zeros * unit;
        Int oz = one_zero * unit + zero_zeros * single;
        zero_zeros = nz;
        one_zero = oz;
    }
    return Rat(zero_zeros + one_zero, ipow(Int(q2), n));
}

inline std::vector<std::uint32_t> primes_upto(std::uint32_t y) {
    std::vector<bool> sieve(static_cast<size_t>(y) + 1, true);
    std::vector<std::uint32_t> primes;
    if (y < 2) return primes;
    sieve[0] = sieve[1] = false;
    for (std::uint32_t i = 2; i <= y; ++i) {
        if (!sieve[i]) continue;
        primes.push_back(i);
        for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= y; j += i)
            sieve[static_cast<size_t>(j)] = false;
    }
    return primes;
}

struct EulerProduct {
    double value = 1.0;
    double tail_bound = 0.0;   // sum_{q > Y} (p-1)^2 / q^2, overestimated by (p-1)^2/Y
    std::uint64_t truncation_Y = 0;
};

/// prod_{q <= Y} delta_q(q, p-1), accumulated in extended precision.
inline EulerProduct euler_product(unsigned p, std::uint64_t Y, unsigned precision_bits = 128) {
    if (Y < 2) throw error("truncation bound must be at least 2");
    precision_guard guard(precision_bits);
    const unsigned n = p - 1;
    Real prod = 1;
    for (auto q : primes_upto(static_cast<std::uint32_t>(Y))) {
        Real qr(q);
        prod *= pow(qr - 1, static_cast<int>(n)) * (qr + static_cast<int>(n)) /
                pow(qr, static_cast<int>(n) + 1);
    }
    EulerProduct out;
    out.value = prod.convert_to<double>();
    out.tail_bound = static_cast<double>(n) * n / static_cast<double>(Y);
    out.truncation_Y = Y;
    return out;
}

enum class Normalization { theorem_c, section6 };

/// Leading constants of the two displayed families, both normalized so that
/// predicted count = c_type * X^{1/(p-1)} * log(X)^{l-1} * mu(W).
struct PredictedConstants {
    unsigned p = 0;
    Normalization normalization = Normalization::theorem_c;
    double euler_product = 0.0;
    double tail_bound = 0.0;
    std::uint64_t truncation_Y = 0;
    Int h_minus;
    double c_wild = 0.0;
    double c_tame = 0.0;
};

inline PredictedConstants predicted_constants(unsigned p, std::uint64_t Y,
                                              Normalization norm) {
    PredictedConstants out;
    out.p = p;
    out.normalization = norm;
    out.truncation_Y = Y;
    auto ep = euler_product(p, Y);
    out.euler_product = ep.value;
    out.tail_bound = ep.tail_bound;
    out.h_minus = determinants::maillet_class_number(p).h_minus;

    const unsigned ell = (p - 1) / 2;
    const double h = out.h_minus.convert_to<double>();
    const double two_pow = std::pow(2.0, static_cast<int>(p) - 2);
    double ell_fact = 1.0;
    for (unsigned k = 2; k <= ell; ++k) ell_fact *= k;

    if (norm == Normalization::theorem_c) {
        double denom = (2.0 * p - 1) * two_pow * std::pow(double(p), int(ell) - 1) * h;
        out.c_wild = ep.value / denom;
        out.c_tame = (2.0 * p - 2) * ep.value / denom;
    } else {
        // section-6 display multiplies H = l! mu, folded into the constant here
        double denom_w =
            (2.0 * p - 1) * two_pow * std::pow(double(p), double(ell) + 1.0 / (p - 1)) * h;
        double denom_t = (2.0 * p - 1) * two_pow *
                         std::pow(double(p), double(ell) - 1.0 + double(p - 2) / (p - 1)) * h;
        out.c_wild = (2.0 * p - 2) * ep.value * ell_fact / denom_w;
        out.c_tame = ep.value * ell_fact / denom_t;
    }
    return out;
}

} // namespace pureshapes::densities
