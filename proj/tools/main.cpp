// pureshapes: shapes, determinant identities, sieve densities and the
// shape census of pure prime degree fields, with exact arithmetic inside
// and JSON/CSV/text reports outside.
#include "pureshapes/census.hpp"
#include "pureshapes/densities.hpp"
#include "pureshapes/determinants.hpp"
#include "pureshapes/fields.hpp"
#include "pureshapes/shapes.hpp"
#include "pureshapes/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace pureshapes;
using nlohmann::ordered_json;

namespace {

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw error("cannot open output file: " + out_path);
    os << text;
}

shapes::ShapeWindow parse_window(unsigned p, const std::string& spec) {
    std::vector<Rat> bounds;
    bool unbounded = false;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "inf" || tok == "Inf" || tok == "INF") {
            unbounded = true;
            break;
        }
        bounds.push_back(parse_rational(tok));
    }
    return shapes::make_window(p, std::move(bounds), unbounded);
}

std::string rat_str(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

int run_shape(unsigned p, const std::string& m_str, unsigned bits,
              const std::string& format, const std::string& out) {
    Int m(m_str);
    auto tuple = fields::factor_radicand(p, m);
    auto presented = fields::from_tuple(tuple);
    auto canonical = fields::canonicalize(tuple);
    auto sv = shapes::shape_params(tuple);
    auto gram = shapes::shape_gram(presented);
    auto num = shapes::eval_matrix(gram, bits);

    if (format == "json") {
        ordered_json j;
        j["schema"] = "pure-shapes/1";
        j["p"] = p;
        j["m"] = m_str;
        j["tuple"] = tuple.a;
        j["canonical_tuple"] = canonical.tuple.a;
        j["ramification"] =
            presented.ramification == fields::Ramification::wild ? "wild" : "tame";
        j["disc"] = presented.disc.str();
        if (presented.eps) j["eps"] = presented.eps->str();
        std::vector<std::string> lam;
        for (const auto& v : sv.lambdas_p) lam.push_back(rat_str(v));
        j["lambda_p"] = lam;
        std::vector<std::vector<double>> g(gram.n, std::vector<double>(gram.n));
        for (unsigned i = 0; i < gram.n; ++i)
            for (unsigned k = 0; k < gram.n; ++k) g[i][k] = to_double(num[i][k]);
        j["shape_gram"] = g;
        j["meta"] = {{"precision_bits", bits}, {"float_format", "ieee754-double-shortest"}};
        write_output(j.dump(2), out);
        return 0;
    }

    std::ostringstream os;
    os << "p = " << p << ", m = " << m_str << "\n";
    os << "tuple (a_1..a_" << p - 1 << "): ";
    for (auto v : tuple.a) os << v << " ";
    os << "\ncanonical orbit representative: ";
    for (auto v : canonical.tuple.a) os << v << " ";
    os << "\nramification: "
       << (presented.ramification == fields::Ramification::wild ? "wild" : "tame");
    if (presented.eps) os << " (eps = " << *presented.eps << ")";
    os << "\ndisc = " << presented.disc << "\n";
    os << "lambda^p (canonical, ascending): ";
    for (const auto& v : sv.lambdas_p) os << rat_str(v) << " ";
    os << "\nshape Gram (" << gram.n << "x" << gram.n << ", " << bits << "-bit eval):\n";
    os.precision(15);
    for (unsigned i = 0; i < gram.n; ++i) {
        os << "  ";
        for (unsigned k = 0; k < gram.n; ++k) os << to_double(num[i][k]) << (k + 1 < gram.n ? " " : "");
        os << "\n";
    }
    write_output(os.str(), out);
    return 0;
}

int run_census(unsigned p, double X, const std::vector<std::string>& window_specs,
               const std::string& type, unsigned workers, std::uint64_t euler_Y,
               const std::string& format, const std::string& out) {
    census::TypeFilter filter = census::TypeFilter::both;
    if (type == "wild") filter = census::TypeFilter::wild;
    else if (type == "tame") filter = census::TypeFilter::tame;

    std::vector<shapes::ShapeWindow> windows;
    for (const auto& s : window_specs) windows.push_back(parse_window(p, s));

    census::CensusOptions opts;
    opts.workers = workers;
    opts.euler_Y = euler_Y;
    auto scan = census::equidistribution_scan(p, X, windows, filter, opts);

    if (format == "json") {
        ordered_json j;
        j["schema"] = "pure-shapes/1";
        j["reports"] = ordered_json::array();
        for (const auto& r : scan.reports) j["reports"].push_back(census::to_json(r));
        j["window_ratios"] = ordered_json::array();
        for (const auto& pr : scan.ratios) {
            ordered_json e;
            e["windows"] = {scan.reports[pr.first].window_desc,
                            scan.reports[pr.second].window_desc};
            e["predicted_mu_ratio"] = pr.predicted;
            e["empirical_wild"] =
                pr.empirical_wild ? ordered_json(*pr.empirical_wild) : ordered_json(nullptr);
            e["empirical_tame"] =
                pr.empirical_tame ? ordered_json(*pr.empirical_tame) : ordered_json(nullptr);
            j["window_ratios"].push_back(e);
        }
        write_output(j.dump(2), out);
        return 0;
    }
    if (format == "csv") {
        std::ostringstream os;
        os << census::csv_header() << "\n";
        for (const auto& r : scan.reports) os << census::to_csv_row(r) << "\n";
        write_output(os.str(), out);
        return 0;
    }

    std::ostringstream os;
    os.precision(10);
    for (const auto& r : scan.reports) {
        os << "window [" << r.window_desc << "] type=" << census::filter_name(r.filter)
           << ": wild " << r.tuple_count_wild << " tuples / " << r.field_count_wild
           << " fields, tame " << r.tuple_count_tame << " tuples / " << r.field_count_tame
           << " fields";
        if (r.mu) os << ", mu = " << *r.mu;
        os << "\n";
        if (r.predicted_wild_section6)
            os << "  predicted (section-6 family, fields): wild " << *r.predicted_wild_section6
               << ", tame " << *r.predicted_tame_section6 << "\n";
        if (r.predicted_wild_theorem_c)
            os << "  predicted (theorem-C family): wild " << *r.predicted_wild_theorem_c
               << ", tame " << *r.predicted_tame_theorem_c << "\n";
    }
    for (const auto& pr : scan.ratios) {
        os << "ratio [" << scan.reports[pr.first].window_desc << "] / ["
           << scan.reports[pr.second].window_desc << "]: predicted " << pr.predicted;
        if (pr.empirical_wild) os << ", wild " << *pr.empirical_wild;
        if (pr.empirical_tame) os << ", tame " << *pr.empirical_tame;
        os << "\n";
    }
    write_output(os.str(), out);
    return 0;
}

// coefficient display helpers: the section-6 coefficients are a reduced
// rational over an extra p^(a/(p-1)) factor
std::string radical_coeff_str(const Rat& rational_part, unsigned p, unsigned num,
                              unsigned den) {
    std::ostringstream os;
    os << numerator(rational_part);
    os << "/(" << denominator(rational_part) << " * " << p << "^(" << num << "/" << den
       << "))";
    return os.str();
}

int run_constants(unsigned p, std::uint64_t Y, const std::string& format,
                  const std::string& out) {
    auto tc = densities::predicted_constants(p, Y, densities::Normalization::theorem_c);
    auto s6 = densities::predicted_constants(p, Y, densities::Normalization::section6);
    const unsigned ell = (p - 1) / 2;

    // reduced rational parts of the section-6 coefficients
    Rat s6_wild_rat = Rat(2 * p - 2) / (Rat(2 * p - 1) * ipow(Int(2), p - 2) *
                                        ipow(Int(p), ell) * tc.h_minus);
    Rat s6_tame_rat = Rat(1) / (Rat(2 * p - 1) * ipow(Int(2), p - 2) *
                                ipow(Int(p), ell - 1) * tc.h_minus);
    Rat tc_wild_rat = Rat(1) / (Rat(2 * p - 1) * ipow(Int(2), p - 2) *
                                ipow(Int(p), ell - 1) * tc.h_minus);

    if (format == "json") {
        ordered_json j;
        j["schema"] = "pure-shapes/1";
        j["p"] = p;
        j["h_minus"] = tc.h_minus.str();
        j["euler_product"] = tc.euler_product;
        j["euler_truncation_Y"] = Y;
        j["euler_tail_bound"] = tc.tail_bound;
        j["theorem_c"] = {{"c_wild", tc.c_wild}, {"c_tame", tc.c_tame}};
        j["section6"] = {{"c_wild", s6.c_wild},
                         {"c_tame", s6.c_tame},
                         {"coeff_wild", radical_coeff_str(s6_wild_rat, p, 1, p - 1)},
                         {"coeff_tame", radical_coeff_str(s6_tame_rat, p, p - 2, p - 1)}};
        j["meta"] = {{"normalization",
                      "counts ~ c * X^(1/(p-1)) * log(X)^(l-1) * mu(W); section-6 "
                      "family folds l! and fits field counts"}};
        write_output(j.dump(2), out);
        return 0;
    }

    std::ostringstream os;
    os.precision(10);
    os << "p = " << p << ", l = " << ell << "\n";
    os << "h_p^- = " << tc.h_minus << " (Maillet determinant route)\n";
    os << "Euler product prod_{q<=" << Y << "} delta_q = " << tc.euler_product
       << " (tail bound " << tc.tail_bound << ")\n";
    os << "theorem-C family:  c_wild = " << rat_str(tc_wild_rat) << " * E = " << tc.c_wild
       << ", c_tame = (2p-2) * c_wild = " << tc.c_tame << "\n";
    os << "section-6 family (fits field counts):\n";
    os << "  wild: " << radical_coeff_str(s6_wild_rat, p, 1, p - 1)
       << " * E * l! = " << s6.c_wild << "\n";
    os << "  tame: " << radical_coeff_str(s6_tame_rat, p, p - 2, p - 1)
       << " * E * l! = " << s6.c_tame << "\n";
    write_output(os.str(), out);
    return 0;
}

int run_verify(const std::string& suite) {
    std::vector<verify::CheckResult> checks;
    if (suite == "determinants") checks = verify::verify_determinants();
    else if (suite == "densities") checks = verify::verify_densities();
    else if (suite == "shapes") checks = verify::verify_shapes();
    else checks = verify::verify_all();
    int bad = 0;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
        if (!c.detail.empty()) std::cout << " -- " << c.detail;
        std::cout << "\n";
        if (!c.pass) ++bad;
    }
    std::cout << (bad == 0 ? "all checks passed" : std::to_string(bad) + " check(s) failed")
              << "\n";
    return bad == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shapes of pure prime degree fields: exact shapes, determinant "
                 "identities, sieve densities and the equidistribution census"};
    app.require_subcommand(1);

    unsigned p = 3;
    std::string m_str = "2";
    unsigned bits = 53;
    std::string format = "text";
    std::string out;
    double X = 1e6;
    std::vector<std::string> window_specs;
    std::string type = "both";
    unsigned workers = 0;
    double euler_Y_raw = 1e6;
    std::string suite = "all";

    auto* shape = app.add_subcommand("shape", "shape data of one field");
    shape->add_option("--p", p, "odd prime degree")->required();
    shape->add_option("--m", m_str, "radicand (p-th-power free, >= 2)")->required();
    shape->add_option("--precision", bits, "evaluation precision in bits")
        ->check(CLI::Range(24u, 4096u));
    shape->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    shape->add_option("--out", out, "output path (default stdout)");

    auto* cen = app.add_subcommand("census", "count tuples/fields by |disc| <= X");
    cen->add_option("--p", p, "odd prime degree")->required();
    cen->add_option("--x", X, "discriminant bound")->required();
    cen->add_option("--window", window_specs,
                    "lambda^p window bounds, comma separated; last may be inf");
    cen->add_option("--type", type)->check(CLI::IsMember({"wild", "tame", "both"}));
    cen->add_option("--workers", workers, "0 = PURESHAPES_WORKERS or hardware");
    cen->add_option("--y", euler_Y_raw, "Euler product truncation");
    cen->add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv"}));
    cen->add_option("--out", out, "output path (default stdout)");

    auto* con = app.add_subcommand("constants", "leading constants and Euler products");
    con->add_option("--p", p, "odd prime degree")->required();
    con->add_option("--y", euler_Y_raw, "Euler product truncation");
    con->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    con->add_option("--out", out, "output path (default stdout)");

    auto* ver = app.add_subcommand("verify", "run identity suites");
    ver->add_option("suite", suite, "determinants|densities|shapes|all")
        ->check(CLI::IsMember({"determinants", "densities", "shapes", "all"}));

    CLI11_PARSE(app, argc, argv);

    const auto euler_Y = static_cast<std::uint64_t>(euler_Y_raw);
    try {
        if (shape->parsed()) return run_shape(p, m_str, bits, format, out);
        if (cen->parsed()) return run_census(p, X, window_specs, type, workers, euler_Y,
                                             format, out);
        if (con->parsed()) return run_constants(p, euler_Y, format, out);
        if (ver->parsed()) return run_verify(suite);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
