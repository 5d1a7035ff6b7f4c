#include "pureshapes/densities.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace pureshapes;
namespace den = pureshapes::densities;

namespace {

// Literal Cartesian enumeration over (Z/q^2)^n; the slowest possible oracle,
// reserved for small cases to pin the automaton-based brute force.
Rat delta_naive(std::uint64_t q, unsigned n) {
    const std::uint64_t q2 = q * q;
    std::uint64_t total = 1;
    for (unsigned i = 0; i < n; ++i) total *= q2;
    std::uint64_t good = 0;
    std::vector<std::uint64_t> t(n, 0);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        unsigned zeros = 0;
        bool ok = true;
        for (unsigned i = 0; i < n; ++i) {
            std::uint64_t r = c % q2;
            c /= q2;
            if (r == 0) { ok = false; break; }       // 0 mod q^2
            if (r % q == 0 && ++zeros > 1) { ok = false; break; }
        }
        if (ok) ++good;
    }
    return Rat(Int(good), Int(total));
}

} // namespace

TEST_CASE("delta_q closed form on the displayed values") {
    CHECK(den::delta_q(2, 2) == Rat(1, 2));
    CHECK(den::delta_q(3, 2) == Rat(20, 27));
    CHECK(den::delta_q(2, 4) == Rat(3, 16));
    CHECK_THROWS_AS(den::delta_q(4, 2), error);
    CHECK_THROWS_AS(den::delta_q(3, 1), error);
}

TEST_CASE("delta_q lies strictly between 0 and 1") {
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull})
        for (unsigned n : {2u, 3u, 4u, 5u, 6u}) {
            Rat v = den::delta_q(q, n);
            CHECK(v > 0);
            CHECK(v < 1);
        }
}

TEST_CASE("polynomial expansions match the displayed n=2 and n=4 forms") {
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull}) {
        Rat qr = Rat(Int(q));
        Rat want2 = Rat(1) - Rat(3) / (qr * qr) + Rat(2) / (qr * qr * qr);
        CHECK(den::delta_q(q, 2) == want2);
        Rat q2 = qr * qr, q3 = q2 * qr, q4 = q3 * qr, q5 = q4 * qr;
        Rat want4 = Rat(1) - Rat(10) / q2 + Rat(20) / q3 - Rat(15) / q4 + Rat(4) / q5;
        CHECK(den::delta_q(q, 4) == want4);
    }
}

TEST_CASE("brute force equals the closed form for q <= 7, n in {2,4,6}") {
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull})
        for (unsigned n : {2u, 4u, 6u})
            CHECK(den::delta_q_bruteforce(q, n) == den::delta_q(q, n));
    CHECK_THROWS_AS(den::delta_q_bruteforce(17, 2), too_large);
    CHECK_THROWS_AS(den::delta_q_bruteforce(5, 7), too_large);
}

TEST_CASE("brute force equals the literal Cartesian enumeration on small cases") {
    CHECK(delta_naive(2, 2) == Rat(1, 2));  // 8 of the 16 pairs survive
    for (std::uint64_t q : {2ull, 3ull})
        for (unsigned n : {2u, 3u, 4u})
            CHECK(den::delta_q_bruteforce(q, n) == delta_naive(q, n));
    CHECK(den::delta_q_bruteforce(5, 4) == delta_naive(5, 4));
    CHECK(den::delta_q_bruteforce(7, 3) == delta_naive(7, 3));
}

TEST_CASE("euler product: single factor and fixtures") {
    auto e = den::euler_product(3, 2);
    CHECK(e.value == 0.5);
    CHECK(e.truncation_Y == 2);

    auto big = den::euler_product(3, 1'000'000);
    CHECK(std::abs(big.value - 0.28674748673798024) < 1e-12);
    auto big5 = den::euler_product(5, 1'000'000);
    CHECK(std::abs(big5.value - 0.040930319292416505) < 1e-13);
    auto big7 = den::euler_product(7, 1'000'000);
    CHECK(std::abs(big7.value - 0.0040345833000115845) < 1e-14);
}

TEST_CASE("euler product is monotone in Y with bounded decrements") {
    for (unsigned p : {3u, 5u, 7u}) {
        double v3 = den::euler_product(p, 1'000).value;
        double v6 = den::euler_product(p, 100'000).value;
        CHECK(v6 <= v3);
        double budget = 0;
        for (auto q : den::primes_upto(100'000))
            if (q > 1'000) budget += double(p - 1) * (p - 1) / (double(q) * q);
        CHECK(v3 - v6 <= budget);
    }
    auto e = den::euler_product(3, 1'000);
    CHECK(e.tail_bound == 4.0 / 1'000);
}

TEST_CASE("predicted constants reproduce the worked p=3 and p=5 coefficients") {
    auto s6_3 = den::predicted_constants(3, 1'000'000, den::Normalization::section6);
    double E3 = s6_3.euler_product;
    // displayed: 2/(15 sqrt 3) for wild, 1/(10 sqrt 3) for tame (l! = 1)
    CHECK(std::abs(s6_3.c_wild - 2.0 / (15 * std::sqrt(3.0)) * E3) < 1e-15);
    CHECK(std::abs(s6_3.c_tame - 1.0 / (10 * std::sqrt(3.0)) * E3) < 1e-15);

    auto s6_5 = den::predicted_constants(5, 1'000'000, den::Normalization::section6);
    double E5 = s6_5.euler_product;
    // displayed: 1/(225 5^(1/4)) and 1/(360 5^(3/4)); l! = 2 folds into ours
    CHECK(std::abs(s6_5.c_wild - 2.0 / (225 * std::pow(5.0, 0.25)) * E5) < 1e-15);
    CHECK(std::abs(s6_5.c_tame - 2.0 / (360 * std::pow(5.0, 0.75)) * E5) < 1e-15);

    auto tc_3 = den::predicted_constants(3, 1'000'000, den::Normalization::theorem_c);
    CHECK(std::abs(tc_3.c_wild - E3 / 10.0) < 1e-15);
    CHECK(std::abs(tc_3.c_tame - 4.0 * E3 / 10.0) < 1e-15);
    CHECK(tc_3.h_minus == 1);
}
