#pragma once

#include "pureshapes/numeric.hpp"

#include <compare>
#include <cstdint>
#include <vector>

namespace pureshapes {

/// A strongly carefree tuple (a_1, ..., a_{p-1}) of positive integers:
/// every a_i squarefree, pairwise coprime, not all 1. Encodes the radicand
/// m = prod a_i^i of the degree-p pure field Q(m^{1/p}).
struct SCTuple {
    unsigned p = 0;                  // odd prime degree
    std::vector<std::uint64_t> a;    // a_1..a_{p-1}, index 0 holds a_1

    unsigned ell() const { return (p - 1) / 2; }

    Int radicand() const {
        Int m = 1;
        for (unsigned i = 0; i < a.size(); ++i) m *= ipow(Int(a[i]), i + 1);
        return m;
    }

    Int radical_product() const {
        Int r = 1;
        for (auto v : a) r *= v;
        return r;
    }

    bool operator==(const SCTuple&) const = default;
};

inline bool lex_less(const SCTuple& x, const SCTuple& y) {
    return x.a < y.a;
}

} // namespace pureshapes
