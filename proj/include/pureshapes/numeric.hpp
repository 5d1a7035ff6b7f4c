#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pureshapes {

// Exact integer and rational scalars (GMP-backed) and arbitrary-precision
// reals (MPFR-backed, runtime precision).
using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

// MPFR working precision is a process-wide default measured in decimal
// digits. Guard restores it on scope exit so nested evaluations compose.
// (Real is only ever touched from one thread at a time in this library;
// the census worker threads deal in exact integers.)
class precision_guard {
public:
    explicit precision_guard(unsigned bits)
        : saved_(Real::default_precision()) {
        // digits10 ~ bits * log10(2), rounded up plus slack
        Real::default_precision(static_cast<unsigned>(bits * 0.30103) + 4);
    }
    ~precision_guard() { Real::default_precision(saved_); }
    precision_guard(const precision_guard&) = delete;
    precision_guard& operator=(const precision_guard&) = delete;

private:
    unsigned saved_;
};

inline Int ipow(Int base, unsigned exp) {
    Int r = 1;
    while (exp) {
        if (exp & 1u) r *= base;
        base *= base;
        exp >>= 1u;
    }
    return r;
}

inline Rat rpow(const Rat& base, long exp) {
    if (exp < 0) {
        if (base == 0) throw std::domain_error("rpow: zero to negative power");
        Rat inv = Rat(denominator(base), numerator(base));
        return rpow(inv, -exp);
    }
    Rat r = 1;
    Rat b = base;
    auto e = static_cast<unsigned long>(exp);
    while (e) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1u;
    }
    return r;
}

// Parses "7", "3/2" or a plain decimal like "2.5" into an exact rational.
inline Rat parse_rational(std::string_view s) {
    auto bad = [&] { return std::invalid_argument("not a rational: " + std::string(s)); };
    if (s.empty()) throw bad();
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Int num(std::string(s.substr(0, slash)));
        Int den(std::string(s.substr(slash + 1)));
        if (den == 0) throw bad();
        return Rat(num, den);
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
        size_t frac_len = s.size() - dot - 1;
        Int num(digits);
        return Rat(num, ipow(Int(10), static_cast<unsigned>(frac_len)));
    }
    return Rat(Int(std::string(s)));
}

inline double to_double(const Rat& x) { return x.convert_to<double>(); }
inline double to_double(const Real& x) { return x.convert_to<double>(); }

// Convert exact scalars to Real at the current default precision. Always go
// through these: constructing Real straight from a GMP expression template
// picks a value-dependent (and sometimes insufficient) precision in the
// Boost release this builds against. Binding to const& materializes the
// expression first, which restores the documented behaviour.
inline Real to_real(const Int& x) { return Real(x); }
inline Real to_real(const Rat& x) { return Real(x); }

} // namespace pureshapes
