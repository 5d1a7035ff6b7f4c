#pragma once

#include "pureshapes/densities.hpp"
#include "pureshapes/determinants.hpp"
#include "pureshapes/errors.hpp"
#include "pureshapes/fields.hpp"
#include "pureshapes/shapes.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace pureshapes::census {

using fields::Ramification;
using shapes::ShapeVector;
using shapes::ShapeWindow;

enum class TypeFilter { wild, tame, both };

/// Region of the census: radicand products up to the bound implied by the
/// discriminant bound X, an optional shape window, and a ramification filter.
struct RegionSpec {
    unsigned p = 3;
    double X = 0;
    std::optional<ShapeWindow> window;
    TypeFilter filter = TypeFilter::both;
};

struct CensusOptions {
    unsigned workers = 0;          // 0: PURESHAPES_WORKERS env or hardware default
    std::uint64_t enumeration_limit = 0;  // 0: per-p default
    std::uint64_t euler_Y = 1'000'000;
};

struct CensusReport {
    unsigned p = 3;
    double X = 0;
    std::string window_desc;
    TypeFilter filter = TypeFilter::both;
    std::uint64_t tuple_count_wild = 0, tuple_count_tame = 0;
    std::uint64_t field_count_wild = 0, field_count_tame = 0;
    double radicand_bound_wild = 0, radicand_bound_tame = 0;
    std::optional<double> mu;      // window measure, bounded windows only
    // predicted counts c * X^{1/(p-1)} log(X)^{l-1} mu(W), per family
    std::optional<double> predicted_wild_theorem_c, predicted_tame_theorem_c;
    std::optional<double> predicted_wild_section6, predicted_tame_section6;
    std::optional<double> ratio_wild_theorem_c, ratio_tame_theorem_c;
    std::optional<double> ratio_wild_section6, ratio_tame_section6;
    std::uint64_t euler_Y = 0;
    double euler_tail_bound = 0;
};

inline std::uint64_t default_enumeration_limit(unsigned p) {
    if (p == 3) return 10'000'000;
    if (p == 5) return 100'000;
    if (p == 7) return 10'000;
    return 1'000;
}

inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PURESHAPES_WORKERS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 64) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : std::min(hw, 8u);
}

/// Radicand-product bound equivalent to |disc| <= X for the given type.
inline double disc_bound_to_radicand_bound(unsigned p, double X, Ramification type) {
    double pexp = type == Ramification::wild ? p : p - 2;
    double min_x = std::pow(double(p), double(p - 2));
    if (X < min_x) throw bound_too_small("X below the smallest tame discriminant");
    return std::pow(X / std::pow(double(p), pexp), 1.0 / (p - 1));
}

// Largest integer P with p^pexp * P^(p-1) <= X, decided exactly.
inline std::uint64_t exact_radicand_bound(unsigned p, const Int& X, unsigned pexp) {
    Int pk = ipow(Int(p), pexp);
    if (pk > X) return 0;
    double est = std::pow(X.convert_to<double>() / pk.convert_to<double>(), 1.0 / (p - 1));
    auto fits = [&](std::uint64_t P) { return pk * ipow(Int(P), p - 1) <= X; };
    std::uint64_t P = est < 1 ? 0 : static_cast<std::uint64_t>(est);
    while (fits(P + 1)) ++P;
    while (P > 0 && !fits(P)) --P;
    return P;
}

namespace detail {

inline std::vector<bool> squarefree_table(std::uint64_t n) {
    std::vector<bool> sq(n + 1, true);
    if (n >= 1) sq[0] = false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        for (std::uint64_t k = d * d; k <= n; k += d * d) sq[k] = false;
    return sq;
}

// Recursive lexicographic enumeration. `first_filter` restricts the a_1 loop
// (used to partition work across threads); `radical` is the product of the
// entries chosen so far, which doubles as the coprimality witness.
template <typename Fn>
void enumerate_rec(unsigned p, std::uint64_t N, const std::vector<bool>& sq,
                   std::vector<std::uint64_t>& a, unsigned pos, std::uint64_t radical,
                   const std::function<bool(std::uint64_t)>& first_filter, Fn&& emit) {
    if (pos == p - 1) {
        if (radical > 1) {
            SCTuple t{p, a};
            emit(t);
        }
        return;
    }
    const std::uint64_t top = N / radical;
    for (std::uint64_t v = 1; v <= top; ++v) {
        if (!sq[v]) continue;
        if (pos == 0 && first_filter && !first_filter(v)) continue;
        if (v > 1 && std::gcd(v, radical) != 1) continue;
        a[pos] = v;
        enumerate_rec(p, N, sq, a, pos + 1, radical * v, first_filter,
                      std::forward<Fn>(emit));
    }
    a[pos] = 1;
}

} // namespace detail

/// Every valid tuple with prod a_i <= N, lexicographically, all-ones excluded.
template <typename Fn>
void enumerate_tuples(unsigned p, std::uint64_t N, Fn&& emit) {
    if (!fields::is_odd_prime(p)) throw error("p must be an odd prime");
    if (N == 0) return;
    auto sq = detail::squarefree_table(N);
    std::vector<std::uint64_t> a(p - 1, 1);
    detail::enumerate_rec(p, N, sq, a, 0, 1, nullptr, std::forward<Fn>(emit));
}

inline std::vector<SCTuple> enumerate_tuples_vec(unsigned p, std::uint64_t N) {
    std::vector<SCTuple> out;
    enumerate_tuples(p, N, [&](const SCTuple& t) { out.push_back(t); });
    return out;
}

namespace detail {

// m mod p^2 from the tuple without big arithmetic (p^2 < 2^16 here).
inline std::uint64_t radicand_mod(const SCTuple& t, std::uint64_t mod) {
    std::uint64_t m = 1;
    for (unsigned i = 0; i < t.a.size(); ++i) {
        std::uint64_t base = t.a[i] % mod;
        for (unsigned k = 0; k <= i; ++k) m = m * base % mod;
    }
    return m;
}

inline Ramification fast_type(const SCTuple& t) {
    const std::uint64_t p2 = static_cast<std::uint64_t>(t.p) * t.p;
    std::uint64_t m = radicand_mod(t, p2);
    if (m % t.p == 0) return Ramification::wild;
    std::uint64_t r = 1;
    for (unsigned k = 0; k < t.p - 1; ++k) r = r * m % p2;
    return r == 1 ? Ramification::tame : Ramification::wild;
}

// True when the tuple is the lexicographically least member of its orbit.
inline bool is_canonical(const SCTuple& t) {
    const unsigned p = t.p;
    std::vector<std::uint64_t> s(p - 1);
    for (unsigned k = 2; k < p; ++k) {
        unsigned kinv = 1;
        for (unsigned c = 1; c < p; ++c)
            if (c * k % p == 1) { kinv = c; break; }
        for (unsigned i = 1; i < p; ++i) s[i - 1] = t.a[(i * kinv) % p - 1];
        if (s < t.a) return false;
    }
    return true;
}

struct WindowAccumulator {
    std::uint64_t tw = 0, tt = 0, fw = 0, ft = 0;
};

} // namespace detail

struct ScanResult {
    std::vector<CensusReport> reports;
    struct PairRatio {
        size_t first = 0, second = 0;
        std::optional<double> empirical_wild, empirical_tame;
        double predicted = 0;
    };
    std::vector<PairRatio> ratios;
};

/// One enumeration pass, every window tested per tuple; counts raw tuples
/// and canonical representatives (= fields). Partitioned over a_1 residues
/// across workers, merged in worker order.
inline ScanResult equidistribution_scan(unsigned p, double X,
                                        const std::vector<ShapeWindow>& windows,
                                        TypeFilter filter = TypeFilter::both,
                                        const CensusOptions& opts = {}) {
    if (!fields::is_odd_prime(p)) throw error("p must be an odd prime");
    for (const auto& w : windows)
        if (w.p != p) throw prime_mismatch("window degree differs from census degree");

    Int Xi = Int(std::floor(X));  // mpz from double is exact
    std::uint64_t bound_wild = exact_radicand_bound(p, Xi, p);
    std::uint64_t bound_tame = exact_radicand_bound(p, Xi, p - 2);
    std::uint64_t N = 0;
    if (filter != TypeFilter::tame) N = std::max(N, bound_wild);
    if (filter != TypeFilter::wild) N = std::max(N, bound_tame);

    std::uint64_t limit = opts.enumeration_limit ? opts.enumeration_limit
                                                 : default_enumeration_limit(p);
    if (N > limit) throw infeasible_bound("radicand bound exceeds enumeration limit");

    const unsigned workers = N > 1000 ? resolve_workers(opts.workers) : 1;
    const size_t nw = windows.size();
    const auto sq = detail::squarefree_table(N);
    // one accumulator row per worker: [window 0..nw-1, totals]
    std::vector<std::vector<detail::WindowAccumulator>> acc(
        workers, std::vector<detail::WindowAccumulator>(nw + 1));

    auto run_worker = [&](unsigned wid) {
        auto& rows = acc[wid];
        std::vector<std::uint64_t> a(p - 1, 1);
        std::function<bool(std::uint64_t)> first =
            workers == 1 ? std::function<bool(std::uint64_t)>(nullptr)
                         : std::function<bool(std::uint64_t)>(
                               [&, wid](std::uint64_t v) { return v % workers == wid; });
        detail::enumerate_rec(p, N, sq, a, 0, 1, first, [&](const SCTuple& t) {
            Ramification type = detail::fast_type(t);
            if (filter == TypeFilter::wild && type != Ramification::wild) return;
            if (filter == TypeFilter::tame && type != Ramification::tame) return;
            std::uint64_t prod = 1;
            for (auto v : t.a) prod *= v;
            std::uint64_t bound = type == Ramification::wild ? bound_wild : bound_tame;
            if (prod > bound) return;
            bool canonical = detail::is_canonical(t);
            ShapeVector s = shapes::shape_params(t);
            auto& tot = rows[nw];
            if (type == Ramification::wild) { ++tot.tw; if (canonical) ++tot.fw; }
            else { ++tot.tt; if (canonical) ++tot.ft; }
            for (size_t k = 0; k < nw; ++k) {
                if (!shapes::window_contains(windows[k], s)) continue;
                auto& r = rows[k];
                if (type == Ramification::wild) { ++r.tw; if (canonical) ++r.fw; }
                else { ++r.tt; if (canonical) ++r.ft; }
            }
        });
    };

    if (workers == 1) {
        run_worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_worker, w);
        for (auto& th : pool) th.join();
    }

    // deterministic merge
    std::vector<detail::WindowAccumulator> merged(nw + 1);
    for (unsigned w = 0; w < workers; ++w)
        for (size_t k = 0; k <= nw; ++k) {
            merged[k].tw += acc[w][k].tw;
            merged[k].tt += acc[w][k].tt;
            merged[k].fw += acc[w][k].fw;
            merged[k].ft += acc[w][k].ft;
        }

    auto consts_tc = densities::predicted_constants(p, opts.euler_Y,
                                                    densities::Normalization::theorem_c);
    auto consts_s6 = densities::predicted_constants(p, opts.euler_Y,
                                                    densities::Normalization::section6);
    const unsigned ell = (p - 1) / 2;
    double scale = std::pow(X, 1.0 / (p - 1)) *
                   std::pow(std::log(std::max(X, 2.0)), static_cast<int>(ell) - 1);

    ScanResult result;
    auto window_desc = [&](size_t k) -> std::string {
        if (k == nw) return "all";
        std::ostringstream os;
        const auto& w = windows[k];
        for (size_t i = 0; i < w.bounds.size(); ++i) {
            if (i) os << ",";
            os << w.bounds[i];
        }
        if (w.unbounded) os << ",inf";
        return os.str();
    };
    std::vector<std::optional<double>> mus(nw + 1);
    for (size_t k = 0; k <= nw; ++k) {
        CensusReport r;
        r.p = p;
        r.X = X;
        r.filter = filter;
        r.window_desc = window_desc(k);
        r.tuple_count_wild = merged[k].tw;
        r.tuple_count_tame = merged[k].tt;
        r.field_count_wild = merged[k].fw;
        r.field_count_tame = merged[k].ft;
        r.radicand_bound_wild = filter == TypeFilter::tame ? 0.0 : double(bound_wild);
        r.radicand_bound_tame = filter == TypeFilter::wild ? 0.0 : double(bound_tame);
        r.euler_Y = consts_tc.truncation_Y;
        r.euler_tail_bound = consts_tc.tail_bound;
        if (k < nw && !windows[k].unbounded) {
            double mu = shapes::measure_window(windows[k]);
            r.mu = mu;
            mus[k] = mu;
            r.predicted_wild_theorem_c = consts_tc.c_wild * scale * mu;
            r.predicted_tame_theorem_c = consts_tc.c_tame * scale * mu;
            r.predicted_wild_section6 = consts_s6.c_wild * scale * mu;
            r.predicted_tame_section6 = consts_s6.c_tame * scale * mu;
            auto ratio = [](std::uint64_t n, std::optional<double> pred)
                -> std::optional<double> {
                if (!pred || *pred <= 0) return std::nullopt;
                return double(n) / *pred;
            };
            r.ratio_wild_theorem_c = ratio(r.tuple_count_wild, r.predicted_wild_theorem_c);
            r.ratio_tame_theorem_c = ratio(r.tuple_count_tame, r.predicted_tame_theorem_c);
            r.ratio_wild_section6 = ratio(r.field_count_wild, r.predicted_wild_section6);
            r.ratio_tame_section6 = ratio(r.field_count_tame, r.predicted_tame_section6);
        }
        result.reports.push_back(std::move(r));
    }

    for (size_t i = 0; i < nw; ++i)
        for (size_t j = i + 1; j < nw; ++j) {
            if (!mus[i] || !mus[j] || *mus[j] == 0) continue;
            ScanResult::PairRatio pr;
            pr.first = i;
            pr.second = j;
            pr.predicted = *mus[i] / *mus[j];
            const auto& a_ = result.reports[i];
            const auto& b_ = result.reports[j];
            if (b_.tuple_count_wild > 0)
                pr.empirical_wild = double(a_.tuple_count_wild) / double(b_.tuple_count_wild);
            if (b_.tuple_count_tame > 0)
                pr.empirical_tame = double(a_.tuple_count_tame) / double(b_.tuple_count_tame);
            result.ratios.push_back(pr);
        }
    return result;
}

/// Census over one region; the "all" totals report when no window is given.
inline CensusReport count(const RegionSpec& spec, const CensusOptions& opts = {}) {
    std::vector<ShapeWindow> ws;
    if (spec.window) ws.push_back(*spec.window);
    auto scan = equidistribution_scan(spec.p, spec.X, ws, spec.filter, opts);
    return spec.window ? scan.reports.front() : scan.reports.back();
}

/// Volume prediction for the lattice-point count of the plain region (no
/// congruence conditions): (N-1) log^{l-1}(N) mu(W) / |jacobian det|.
inline double region_volume_prediction(unsigned p, double N, const ShapeWindow& w) {
    if (N <= 1) return 0;
    double cp = abs(determinants::jacobian_det(p)).convert_to<double>();
    const unsigned ell = (p - 1) / 2;
    return (N - 1) * std::pow(std::log(N), static_cast<int>(ell) - 1) *
           shapes::measure_window(w) / cp;
}

/// Integer points of the literal region: a_i >= 1, prod a_i < N, and the
/// index-ordered chain R_1 <= lambda_1^p < ... < lambda_l^p <= R_{l+1}
/// with lambda_i^p > R_i. No squarefree or coprimality conditions.
inline std::uint64_t region_lattice_count(unsigned p, std::uint64_t N,
                                          const ShapeWindow& w) {
    if (w.p != p) throw prime_mismatch("window degree differs");
    const unsigned ell = (p - 1) / 2;
    std::uint64_t count = 0;
    std::vector<std::uint64_t> a(p - 1, 1);
    std::function<void(unsigned, std::uint64_t)> rec = [&](unsigned pos,
                                                           std::uint64_t prod) {
        if (pos == p - 1) {
            SCTuple t{p, a};
            std::vector<Rat> lam(ell);
            for (unsigned j = 1; j <= ell; ++j) {
                Rat v(1);
                for (unsigned i = 1; i <= ell; ++i) {
                    long e = 2L * i * j - static_cast<long>(p) - 2L * p * ((i * j) / p);
                    v *= rpow(Rat(Int(a[i - 1]), Int(a[p - i - 1])), e);
                }
                lam[j - 1] = std::move(v);
            }
            if (lam[0] < w.bounds[0]) return;
            for (unsigned i = 0; i + 1 < ell; ++i)
                if (!(lam[i] < lam[i + 1])) return;
            for (unsigned i = 1; i < ell; ++i)
                if (!(lam[i] > w.bounds[i])) return;
            if (!w.unbounded && lam[ell - 1] > w.bounds[ell]) return;
            ++count;
            return;
        }
        for (std::uint64_t v = 1; prod * v < N; ++v) {
            a[pos] = v;
            rec(pos + 1, prod * v);
        }
        a[pos] = 1;
    };
    rec(0, 1);
    return count;
}

// --- serialization ---

inline const char* filter_name(TypeFilter f) {
    switch (f) {
        case TypeFilter::wild: return "wild";
        case TypeFilter::tame: return "tame";
        default: return "both";
    }
}

inline nlohmann::ordered_json to_json(const CensusReport& r) {
    nlohmann::ordered_json j;
    j["schema"] = "pure-shapes/1";
    j["p"] = r.p;
    j["X"] = r.X;
    j["window"] = r.window_desc;
    j["type_filter"] = filter_name(r.filter);
    j["tuple_count_wild"] = r.tuple_count_wild;
    j["tuple_count_tame"] = r.tuple_count_tame;
    j["field_count_wild"] = r.field_count_wild;
    j["field_count_tame"] = r.field_count_tame;
    j["radicand_bound_wild"] = r.radicand_bound_wild;
    j["radicand_bound_tame"] = r.radicand_bound_tame;
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    j["mu"] = opt(r.mu);
    j["predicted"] = {{"theorem_c",
                       {{"wild", opt(r.predicted_wild_theorem_c)},
                        {"tame", opt(r.predicted_tame_theorem_c)}}},
                      {"section6",
                       {{"wild", opt(r.predicted_wild_section6)},
                        {"tame", opt(r.predicted_tame_section6)}}}};
    j["ratios"] = {{"theorem_c",
                    {{"wild", opt(r.ratio_wild_theorem_c)},
                     {"tame", opt(r.ratio_tame_theorem_c)}}},
                   {"section6",
                    {{"wild", opt(r.ratio_wild_section6)},
                     {"tame", opt(r.ratio_tame_section6)}}}};
    j["meta"] = {{"euler_truncation_Y", r.euler_Y},
                 {"euler_tail_bound", r.euler_tail_bound},
                 {"measure_rel_err", 1e-9},
                 {"float_format", "ieee754-double-shortest"}};
    return j;
}

inline std::string csv_header() {
    return "p,X,window,type_filter,tuple_count_wild,tuple_count_tame,"
           "field_count_wild,field_count_tame,mu,"
           "predicted_wild_theorem_c,predicted_tame_theorem_c,"
           "predicted_wild_section6,predicted_tame_section6";
}

inline std::string to_csv_row(const CensusReport& r) {
    std::ostringstream os;
    os.precision(17);
    auto opt = [&](const std::optional<double>& v) -> std::string {
        if (!v) return "";
        std::ostringstream t;
        t.precision(17);
        t << *v;
        return t.str();
    };
    // RFC 4180: the window field may contain commas, so it is quoted
    os << r.p << ',' << r.X << ',' << '"' << r.window_desc << '"' << ','
       << filter_name(r.filter) << ',' << r.tuple_count_wild << ',' << r.tuple_count_tame
       << ',' << r.field_count_wild << ',' << r.field_count_tame << ',' << opt(r.mu) << ','
       << opt(r.predicted_wild_theorem_c) << ',' << opt(r.predicted_tame_theorem_c) << ','
       << opt(r.predicted_wild_section6) << ',' << opt(r.predicted_tame_section6);
    return os.str();
}

} // namespace pureshapes::census
