#include "ilat/cli.hpp"

#include <CLI11.hpp>
#include <gmpxx.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ilat/bernoulli.hpp"
#include "ilat/delta_fixtures.hpp"
#include "ilat/errors.hpp"
#include "ilat/iwasawa.hpp"
#include "ilat/kubota_leopoldt.hpp"
#include "ilat/lattice_classes.hpp"
#include "ilat/padic.hpp"
#include "ilat/reducibility.hpp"

namespace ilat::cli {
namespace {

using nlohmann::json; // object keys live in a std::map, so dumps are sorted

constexpr int kSchemaVersion = 1;

/// Post-parse problems with a flag's value; mapped to exit code 2.
struct UsageError {
    std::string message;
};

/// A composite-run stage that failed its check; mapped to exit code 1.
struct StageFailure {
    std::string stage;
    std::string message;
};

// --------------------------------------------------------------------------
// small parsing helpers
// --------------------------------------------------------------------------

bool small_prime(long n) {
    if (n < 2)
        return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

/// Flags that name a prime must hold an odd prime; anything else is a usage
/// error on that flag, not a domain failure.
void require_odd_prime(long p, const std::string& flag) {
    if (p < 3 || !small_prime(p))
        throw UsageError{flag + ": " + std::to_string(p) +
                         " is not an odd prime"};
}

mpz_class parse_mpz(const std::string& text, const std::string& flag) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](unsigned char ch) { return std::isspace(ch); }),
            s.end());
    if (s.empty())
        throw UsageError{flag + ": empty integer"};
    mpz_class z;
    if (mpz_set_str(z.get_mpz_t(), s.c_str(), 10) != 0)
        throw UsageError{flag + ": \"" + text + "\" is not a decimal integer"};
    return z;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

std::vector<mpz_class> parse_int_list(const std::string& text,
                                      const std::string& flag) {
    std::vector<mpz_class> out;
    for (const std::string& part : split(text, ','))
        out.push_back(parse_mpz(part, flag));
    return out;
}

/// Parse a polynomial in T such as "T^2+683*T+10" into a lowest-degree-first
/// coefficient vector.  Accepted terms: "c", "T", "c*T", "cT", "T^k", "c*T^k".
std::vector<mpz_class> parse_poly(const std::string& text,
                                  const std::string& flag) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch)))
            s.push_back(ch);
    if (s.empty())
        throw UsageError{flag + ": empty polynomial"};

    std::vector<mpz_class> coeffs;
    auto bump = [&coeffs](long deg, const mpz_class& c) {
        if (deg >= static_cast<long>(coeffs.size()))
            coeffs.resize(static_cast<std::size_t>(deg) + 1, mpz_class(0));
        coeffs[static_cast<std::size_t>(deg)] += c;
    };

    std::size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+') {
            ++i;
        } else if (s[i] == '-') {
            sign = -1;
            ++i;
        }
        if (i >= s.size())
            throw UsageError{flag + ": dangling sign in \"" + text + "\""};

        std::string digits;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            digits.push_back(s[i++]);
        bool star = false;
        if (i < s.size() && s[i] == '*') {
            star = true;
            ++i;
        }
        bool has_t = false;
        long deg = 0;
        if (i < s.size() && (s[i] == 'T' || s[i] == 't')) {
            has_t = true;
            deg = 1;
            ++i;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::string e;
                while (i < s.size() &&
                       std::isdigit(static_cast<unsigned char>(s[i])))
                    e.push_back(s[i++]);
                if (e.empty() || e.size() > 2)
                    throw UsageError{flag + ": bad exponent in \"" + text +
                                     "\""};
                deg = std::stol(e);
            }
        }
        if (star && !has_t)
            throw UsageError{flag + ": '*' must be followed by T in \"" + text +
                             "\""};
        if (!has_t && digits.empty())
            throw UsageError{flag + ": malformed term in \"" + text + "\""};
        mpz_class c = digits.empty() ? mpz_class(1) : mpz_class(digits);
        bump(deg, sign * c);
        if (i < s.size() && s[i] != '+' && s[i] != '-')
            throw UsageError{flag + ": unexpected character '" +
                             std::string(1, s[i]) + "' in \"" + text + "\""};
    }
    while (coeffs.size() > 1 && coeffs.back() == 0)
        coeffs.pop_back();
    return coeffs;
}

std::string poly_to_string(const std::vector<mpz_class>& poly) {
    std::ostringstream os;
    bool first = true;
    for (long d = static_cast<long>(poly.size()) - 1; d >= 0; --d) {
        const mpz_class& c = poly[static_cast<std::size_t>(d)];
        if (c == 0)
            continue;
        if (!first)
            os << " + ";
        if (d == 0) {
            os << c;
        } else {
            if (c != 1)
                os << c << "*";
            os << "T";
            if (d > 1)
                os << "^" << d;
        }
        first = false;
    }
    if (first)
        os << "0";
    return os.str();
}

/// Factor lists like "T+686:1,T+5:1,T+10:2".  The caller asserts that the
/// polynomials are irreducible and pairwise distinct; they are stored as
/// certified so the counting layer accepts them, and the report marks the
/// provenance as asserted.
std::vector<PrimeFactorMult> parse_factor_list(const std::string& text,
                                               long p, int N,
                                               const std::string& flag) {
    std::vector<PrimeFactorMult> out;
    if (text.empty())
        return out;
    const mpz_class mod = p_power(p, N);
    for (const std::string& item : split(text, ',')) {
        std::string poly_part = item;
        int mult = 1;
        if (auto pos = item.rfind(':'); pos != std::string::npos) {
            poly_part = item.substr(0, pos);
            const std::string m = item.substr(pos + 1);
            if (m.empty() ||
                !std::all_of(m.begin(), m.end(), [](unsigned char ch) {
                    return std::isdigit(ch);
                }))
                throw UsageError{flag + ": bad multiplicity in \"" + item +
                                 "\""};
            mult = static_cast<int>(std::stol(m));
            if (mult < 1)
                throw UsageError{flag + ": multiplicity must be positive in \"" +
                                 item + "\""};
        }
        std::vector<mpz_class> coeffs = parse_poly(poly_part, flag);
        if (coeffs.size() < 2)
            throw UsageError{flag + ": factor \"" + poly_part +
                             "\" must have degree >= 1 in T"};
        if (coeffs.back() != 1)
            throw UsageError{flag + ": factor \"" + poly_part +
                             "\" must be monic in T"};
        for (mpz_class& c : coeffs)
            mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());

        HeightOnePrimeFactor f;
        f.kind = PrimeKind::Distinguished;
        f.p = p;
        f.N = N;
        f.poly = std::move(coeffs);
        f.irreducibility = Irreducibility::Certified;
        f.certificate = CertificateTag::None;
        out.push_back({std::move(f), mult});
    }
    return out;
}

struct FromKl {
    long p = 0;
    long j = 0;
    int N = 0;
    int M = 0;
};

FromKl parse_from_kl(const std::string& text, const std::string& flag) {
    const std::vector<std::string> parts = split(text, ',');
    if (parts.size() != 4)
        throw UsageError{flag + ": expected \"p,j,N,M\", got \"" + text + "\""};
    long vals[4];
    for (int i = 0; i < 4; ++i) {
        const mpz_class z = parse_mpz(parts[static_cast<std::size_t>(i)], flag);
        if (z < 1 || !z.fits_slong_p())
            throw UsageError{flag + ": all four values must be positive"};
        vals[i] = z.get_si();
    }
    return FromKl{vals[0], vals[1], static_cast<int>(vals[2]),
                  static_cast<int>(vals[3])};
}

/// ILAT_CACHE_DIR overrides any --cache-dir value.
std::string resolve_cache_dir(const std::string& flag_value) {
    if (const char* env = std::getenv("ILAT_CACHE_DIR"); env && *env)
        return env;
    return flag_value;
}

// --------------------------------------------------------------------------
// JSON model builders
// --------------------------------------------------------------------------

json base_report(const char* command) {
    json j;
    j["command"] = command;
    j["schema_version"] = kSchemaVersion;
    return j;
}

json series_json(const IwasawaSeries& f) {
    json j;
    j["p"] = f.prime();
    j["precision_p"] = f.precision_p();
    j["truncation"] = f.truncation();
    json cs = json::array();
    for (const mpz_class& c : f.coefficients())
        cs.push_back(c.get_str());
    j["coefficients"] = cs;
    return j;
}

const char* irr_name(Irreducibility irr) {
    switch (irr) {
    case Irreducibility::Certified:
        return "certified";
    case Irreducibility::Assumed:
        return "assumed";
    default:
        return "unresolved";
    }
}

const char* cert_name(CertificateTag tag) {
    switch (tag) {
    case CertificateTag::Degree1:
        return "degree-1";
    case CertificateTag::Eisenstein:
        return "eisenstein";
    case CertificateTag::NewtonSingleSlope:
        return "newton-single-slope";
    default:
        return "none";
    }
}

json factor_json(const PrimeFactorMult& fm) {
    json j;
    j["multiplicity"] = fm.multiplicity;
    if (fm.prime.kind == PrimeKind::PrimeP) {
        j["kind"] = "p";
    } else {
        j["kind"] = "distinguished";
        j["degree"] = fm.prime.degree();
        json cs = json::array();
        for (const mpz_class& c : fm.prime.poly)
            cs.push_back(c.get_str());
        j["poly"] = cs;
        j["poly_string"] = poly_to_string(fm.prime.poly);
    }
    j["irreducibility"] = irr_name(fm.prime.irreducibility);
    j["certificate"] = cert_name(fm.prime.certificate);
    return j;
}

std::string ideal_string(const IdealFactorization& fact) {
    std::ostringstream os;
    bool wrote = false;
    if (fact.mu > 0) {
        os << "p^" << fact.mu;
        wrote = true;
    }
    for (const PrimeFactorMult& fm : fact.factors) {
        if (wrote)
            os << " * ";
        if (fm.prime.kind == PrimeKind::PrimeP)
            os << "(p)";
        else
            os << "(" << poly_to_string(fm.prime.poly) << ")";
        if (fm.multiplicity != 1)
            os << "^" << fm.multiplicity;
        wrote = true;
    }
    if (!wrote)
        os << "(1)";
    return os.str();
}

json fact_json(const IdealFactorization& fact) {
    json j;
    j["certified"] = fact.certified;
    j["ideal_string"] = ideal_string(fact);
    j["mu"] = fact.mu;
    json fs = json::array();
    for (const PrimeFactorMult& fm : fact.factors)
        fs.push_back(factor_json(fm));
    j["factors"] = fs;
    return j;
}

json tuple_json(const DivisorTuple& t) {
    json arr = json::array();
    arr.push_back(t.a);
    for (int x : t.m)
        arr.push_back(x);
    return arr;
}

json variation_json(const VariationSet& v) {
    json j;
    j["base"] = v.base;
    j["singleton"] = v.singleton;
    j["size"] = static_cast<long long>(v.size());
    json m = json::array();
    for (const DivisorTuple& t : v.multipliers)
        m.push_back(tuple_json(t));
    j["multipliers"] = m;
    return j;
}

/// Render one divisor tuple of `fact` as an ideal, e.g. "p^2 * (T + 5)".
std::string divisor_string(const IdealFactorization& fact,
                           const DivisorTuple& t) {
    std::ostringstream os;
    bool wrote = false;
    if (t.a > 0) {
        os << "p^" << t.a;
        wrote = true;
    }
    for (std::size_t i = 0; i < t.m.size(); ++i) {
        if (t.m[i] == 0)
            continue;
        if (wrote)
            os << " * ";
        os << "(" << poly_to_string(fact.factors[i].prime.poly) << ")";
        if (t.m[i] != 1)
            os << "^" << t.m[i];
        wrote = true;
    }
    return wrote ? os.str() : std::string("1");
}

json mat_json(const Mat2& m) {
    return json::array(
        {json::array({m.a.residue().get_str(), m.b.residue().get_str()}),
         json::array({m.c.residue().get_str(), m.d.residue().get_str()})});
}

/// Hypotheses the divisor-to-lattice dictionary relies on; the tool records
/// them as asserted input, it cannot verify them.
json asserted_hypotheses() {
    json j;
    j["gorenstein"] = true;
    j["ideal_equals_reducibility_ideal"] = true;
    j["local_characters_distinct"] = true;
    j["residually_reducible"] = true;
    return j;
}

// --------------------------------------------------------------------------
// command configurations
// --------------------------------------------------------------------------

struct IrregularCfg {
    long p_max = 0;
    bool json_out = false;
};

struct KlCfg {
    long p = 0;
    long j = 0;
    int N = 8;
    int M = 8;
    int lambda_max = 6;
    std::string cache_dir;
    bool verify = false;
    bool json_out = false;
};

struct WeierCfg {
    long p = 0;
    std::string coeffs;
    int N = 8;
    int M = 8;
    int lambda_max = 6;
    std::vector<long> specialize;
    std::string u;
    bool json_out = false;
};

struct LatticeCfg {
    int mu = 0;
    bool mu_given = false;
    std::string factors;
    long p = 691;
    int prec_p = 8;
    std::string from_kl;
    std::string cache_dir;
    int lambda_max = 6;
    bool json_out = false;       // lattice-count only
    std::string dot_path;        // lattice-graph only
    std::string json_path;       // lattice-graph only
};

struct DvrCfg {
    std::string rep_path;
    int word_bound = 6;
    bool chain = false;
    bool json_out = false;
};

struct DeltaCfg {
    long l_max = 0;
    long n_max = 1000;
    bool json_out = false;
};

struct ShowcaseCfg {
    int N = 8;
    int M = 8;
    long l_max = 200;
    long n_max = 1000;
    std::string cache_dir;
    int lambda_max = 6;
    bool unit_base = false;
    bool json_out = false;
};

// --------------------------------------------------------------------------
// command runners (each returns the JSON report)
// --------------------------------------------------------------------------

json run_irregular(const IrregularCfg& c) {
    const auto pairs = scan_irregular_pairs(c.p_max);
    json rep = base_report("irregular-pairs");
    rep["p_max"] = c.p_max;
    rep["count"] = static_cast<long long>(pairs.size());
    json rows = json::array();
    for (const auto& [p, k] : pairs)
        rows.push_back(json{{"k", k}, {"p", p}});
    rep["pairs"] = rows;
    return rep;
}

json run_kl(const KlCfg& c) {
    require_odd_prime(c.p, "--p");
    KLOptions opts;
    opts.cache_dir = resolve_cache_dir(c.cache_dir);
    const KLSeries kl = kl_series(c.p, c.j, c.N, c.M, opts);
    const auto [mu, lambda] = iwasawa_invariants(kl);
    const IdealFactorization fact = kl_factorization(kl, c.lambda_max);

    json rep = base_report("kl");
    rep["p"] = c.p;
    rep["chi_omega_exp"] = kl.chi.j;
    rep["prec_p"] = c.N;
    rep["prec_t"] = c.M;
    rep["guaranteed_N"] = kl.guaranteed_N;
    rep["construction"] = "interpolation-solve";
    rep["series"] = series_json(kl.series);
    rep["invariants"] = json{{"lambda", lambda}, {"mu", mu}};
    rep["factorization"] = fact_json(fact);

    if (c.verify) {
        std::vector<long> weights;
        for (long k = 2; k <= static_cast<long>(c.M) + c.N + 3; ++k)
            weights.push_back(k); // construction window plus two held out
        const auto rows = verify_interpolation(kl, weights);
        bool all_ok = true;
        json jr = json::array();
        for (const InterpolationCheck& r : rows) {
            all_ok = all_ok && r.ok;
            jr.push_back(json{{"lhs", r.lhs.residue().get_str()},
                              {"ok", r.ok},
                              {"precision", r.precision},
                              {"rhs", r.rhs.residue().get_str()},
                              {"weight", r.weight}});
        }
        rep["verification"] =
            json{{"all_ok", all_ok}, {"held_out_weights", 2}, {"rows", jr}};
    }
    return rep;
}

json run_weierstrass(const WeierCfg& c) {
    require_odd_prime(c.p, "--p");
    const std::vector<mpz_class> coeffs = parse_int_list(c.coeffs, "--coeffs");
    const IwasawaSeries f(c.p, c.N, c.M, coeffs);
    const WeierstrassFactorization w = weierstrass(f);
    const DistinguishedFactorization df =
        factor_distinguished(w.distinguished, c.p, w.part_N, c.lambda_max);

    json rep = base_report("weierstrass");
    rep["p"] = c.p;
    rep["prec_p"] = c.N;
    rep["prec_t"] = c.M;
    rep["input"] = series_json(f);
    rep["mu"] = w.mu;
    rep["lambda"] = w.lambda;
    rep["guaranteed_N"] = w.guaranteed_N;
    rep["part_N"] = w.part_N;
    json dc = json::array();
    for (const mpz_class& z : w.distinguished)
        dc.push_back(z.get_str());
    rep["distinguished"] = dc;
    rep["distinguished_string"] = poly_to_string(w.distinguished);
    rep["unit"] = series_json(w.unit);
    json fs = json::array();
    for (const PrimeFactorMult& fm : df.factors)
        fs.push_back(factor_json(fm));
    rep["factors"] = fs;
    rep["factors_guaranteed_N"] = df.guaranteed_N;

    if (!c.specialize.empty()) {
        PAdicInt u = default_one_unit(c.p, c.N);
        if (!c.u.empty()) {
            u = PAdicInt(c.p, c.N, parse_mpz(c.u, "--u"));
            const mpz_class p2 = p_power(c.p, std::min(c.N, 2));
            if (u.residue() % p2 != (1 + c.p) % p2)
                throw UsageError{"--u: the generator value must be congruent "
                                 "to 1 + p mod p^2"};
        }
        json rows = json::array();
        for (long k : c.specialize) {
            const PAdicInt v = f.specialize(static_cast<int>(k), u);
            rows.push_back(json{{"precision", v.precision()},
                                {"value", v.residue().get_str()},
                                {"weight", k}});
        }
        rep["specializations"] = rows;
        rep["u"] = u.residue().get_str();
    }
    return rep;
}

struct SourceResult {
    IdealFactorization fact;
    json source;
};

SourceResult resolve_factorization_source(const LatticeCfg& c,
                                          const char* command) {
    if (!c.from_kl.empty()) {
        const FromKl q = parse_from_kl(c.from_kl, "--from-kl");
        require_odd_prime(q.p, "--from-kl");
        KLOptions opts;
        opts.cache_dir = resolve_cache_dir(c.cache_dir);
        const KLSeries kl = kl_series(q.p, q.j, q.N, q.M, opts);
        IdealFactorization fact = kl_factorization(kl, c.lambda_max);
        json src;
        src["kind"] = "kl";
        src["p"] = q.p;
        src["chi_omega_exp"] = kl.chi.j;
        src["prec_p"] = q.N;
        src["prec_t"] = q.M;
        src["factor_provenance"] = "computed";
        return {std::move(fact), std::move(src)};
    }
    if (!c.mu_given && c.factors.empty())
        throw UsageError{std::string(command) +
                         ": provide --mu and/or --factors, or --from-kl"};
    require_odd_prime(c.p, "--p");
    IdealFactorization fact;
    fact.mu = c.mu;
    fact.certified = true;
    fact.factors = parse_factor_list(c.factors, c.p, c.prec_p, "--factors");
    json src;
    src["kind"] = "synthetic";
    src["p"] = c.p;
    src["factor_provenance"] = "asserted";
    return {std::move(fact), std::move(src)};
}

json run_lattice_count(const LatticeCfg& c) {
    auto [fact, src] = resolve_factorization_source(c, "lattice-count");
    const long n = count_free(fact);
    json rep = base_report("lattice-count");
    rep["asserted_hypotheses"] = asserted_hypotheses();
    rep["count_free"] = n;
    json exps = json::array();
    for (const PrimeFactorMult& fm : fact.factors)
        exps.push_back(fm.multiplicity);
    rep["exponents"] = exps;
    rep["factorization"] = fact_json(fact);
    rep["mu"] = fact.mu;
    rep["source"] = src;
    return rep;
}

json run_lattice_graph(const LatticeCfg& c, std::string* dot_out) {
    auto [fact, src] = resolve_factorization_source(c, "lattice-graph");
    const LatticeGraph g = rectangle_graph(fact);
    *dot_out = to_dot(g);

    json rep = base_report("lattice-graph");
    rep["asserted_hypotheses"] = asserted_hypotheses();
    rep["vertex_count"] = static_cast<long long>(g.vertices.size());
    rep["edge_count"] = static_cast<long long>(g.edges.size());
    json vs = json::array();
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        vs.push_back(json{{"label", g.labels[i]},
                          {"tuple", tuple_json(g.vertices[i])}});
    rep["vertices"] = vs;
    json es = json::array();
    for (const auto& [x, y] : g.edges)
        es.push_back(json::array({x, y}));
    rep["edges"] = es;
    rep["factorization"] = fact_json(fact);
    rep["mu"] = fact.mu;
    rep["source"] = src;
    return rep;
}

MatrixRep load_rep(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw UsageError{"--rep: cannot read \"" + path + "\""};
    json rj;
    try {
        rj = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError{"--rep: invalid JSON in \"" + path + "\": " + e.what()};
    }
    if (!rj.is_object() || !rj.contains("p") || !rj.contains("N") ||
        !rj.contains("generators"))
        throw UsageError{"--rep: expected an object with \"p\", \"N\", "
                         "\"generators\" (and optional \"g0\")"};
    if (!rj["p"].is_number_integer() || !rj["N"].is_number_integer() ||
        !rj["generators"].is_array() || rj["generators"].empty())
        throw UsageError{"--rep: \"p\"/\"N\" must be integers and "
                         "\"generators\" a non-empty array"};

    MatrixRep rep;
    rep.p = rj["p"].get<long>();
    rep.N = rj["N"].get<int>();
    if (rep.p < 3 || !small_prime(rep.p) || rep.N < 1)
        throw UsageError{"--rep: \"p\" must be an odd prime and \"N\" "
                         "positive"};
    auto entry = [](const json& e, const char* where) -> mpz_class {
        if (e.is_number_integer())
            return mpz_class(e.get<long>());
        if (e.is_string())
            return parse_mpz(e.get<std::string>(), "--rep");
        throw UsageError{std::string("--rep: ") + where +
                         " entries must be integers or decimal strings"};
    };
    for (const json& gj : rj["generators"]) {
        if (!gj.is_object() || !gj.contains("label") || !gj.contains("matrix"))
            throw UsageError{"--rep: each generator needs \"label\" and "
                             "\"matrix\""};
        const json& m = gj["matrix"];
        if (!m.is_array() || m.size() != 2 || !m[0].is_array() ||
            !m[1].is_array() || m[0].size() != 2 || m[1].size() != 2)
            throw UsageError{"--rep: \"matrix\" must be a 2x2 array"};
        Generator g;
        g.label = gj["label"].get<std::string>();
        if (g.label.empty())
            throw UsageError{"--rep: generator labels must be non-empty"};
        g.matrix = Mat2::from_integers(rep.p, rep.N, entry(m[0][0], "matrix"),
                                       entry(m[0][1], "matrix"),
                                       entry(m[1][0], "matrix"),
                                       entry(m[1][1], "matrix"));
        rep.generators.push_back(std::move(g));
    }
    std::size_t g0 = 0;
    if (rj.contains("g0")) {
        if (!rj["g0"].is_number_integer() || rj["g0"].get<long long>() < 0)
            throw UsageError{"--rep: \"g0\" must be a non-negative index"};
        g0 = rj["g0"].get<std::size_t>();
    }
    if (g0 >= rep.generators.size())
        throw UsageError{"--rep: \"g0\" index is out of range"};
    rep.g0_index = g0;
    return rep;
}

json run_dvr(const DvrCfg& c) {
    const MatrixRep mrep = load_rep(c.rep_path);
    json rep = base_report("dvr-analyze");
    rep["p"] = mrep.p;
    rep["N"] = mrep.N;
    rep["word_bound"] = c.word_bound;
    json labels = json::array();
    for (const Generator& g : mrep.generators)
        labels.push_back(g.label);
    rep["generators"] = labels;
    rep["g0"] = mrep.generators[mrep.g0_index].label;

    const Diagonalization diag = diagonalize_g0(mrep);
    rep["eigenvalues"] = json{{"lambda_1", diag.lambda1.residue().get_str()},
                              {"lambda_2", diag.lambda2.residue().get_str()}};
    json hyp;
    hyp["local_characters_distinct"] = true; // verified by diagonalization

    try {
        const ReducibilityResult r = reducibility_ideal(mrep, c.word_bound);
        const bool stable = r.saturation == Saturation::Stable;
        rep["reducibility"] =
            json{{"examined_words", r.examined_words},
                 {"min_val_b", r.min_val_b},
                 {"min_val_c", r.min_val_c},
                 {"ord", r.ord},
                 {"ord_is_lower_bound", !stable},
                 {"saturation", stable ? "stable" : "bound-hit"},
                 {"witness", json{{"b_word", r.witness.first},
                                  {"c_word", r.witness.second}}}};
        hyp["residually_reducible"] = r.ord >= 1;
        if (!stable) {
            rep["note"] = "word bound hit before the search saturated; class "
                          "counts are withheld (rerun with a larger "
                          "--word-bound)";
        } else {
            rep["count_classes"] = count_classes(mrep, c.word_bound);
            if (r.ord >= 1) {
                const ResidualCharacters rc =
                    residual_characters(mrep, r.ord, c.word_bound);
                json t1, t2;
                for (const auto& [label, v] : rc.theta1)
                    t1[label] = v.residue().get_str();
                for (const auto& [label, v] : rc.theta2)
                    t2[label] = v.residue().get_str();
                rep["residual_characters"] = json{{"modulus_exponent", rc.n},
                                                  {"theta_1", t1},
                                                  {"theta_2", t2}};
            }
            if (c.chain) {
                const LatticeChain ch = lattice_chain(mrep, c.word_bound);
                json bases = json::array();
                json stab = json::array();
                for (const Mat2& b : ch.bases) {
                    bases.push_back(mat_json(b));
                    std::string verdict;
                    try {
                        verdict = preserves_lattice(mrep, b) ? "verified"
                                                             : "violated";
                    } catch (const InsufficientPrecision&) {
                        verdict = "unverifiable-at-precision";
                    }
                    stab.push_back(verdict);
                }
                rep["chain"] =
                    json{{"bases", bases},
                         {"length", static_cast<long long>(ch.bases.size())},
                         {"quotient_type", ch.quotient_type},
                         {"stability", stab}};
            }
        }
    } catch (const InfiniteWithinPrecision&) {
        hyp["residually_reducible"] = true;
        rep["reducible_within_precision"] = true;
        rep["note"] =
            "all off-diagonal entries vanish at this precision: the "
            "representation is reducible as far as can be seen, every p-power "
            "index then yields a stable lattice, and the number of stable "
            "lattice classes is infinite rather than finite";
    }
    rep["hypotheses"] = hyp;
    return rep;
}

json run_delta(const DeltaCfg& c) {
    const QExpansion qe = tau_coefficients(c.n_max);
    json rep = base_report("delta-check");
    rep["l_max"] = c.l_max;
    rep["modulus"] = weight12_congruence_prime;
    rep["n_max"] = c.n_max;

    bool all = true;
    int min_val = std::numeric_limits<int>::max();
    bool saw_j_prime = false;
    json rows = json::array();
    for (long l = 2; l <= c.l_max; ++l) {
        if (!small_prime(l))
            continue;
        const bool cong = eisenstein_congruence(l, qe);
        all = all && cong;
        int val = 0;
        if (l == weight12_congruence_prime) {
            val = p_generator_valuation(qe);
        } else {
            val = j_generator_valuation(l, qe);
            min_val = std::min(min_val, val);
            saw_j_prime = true;
        }
        rows.push_back(json{{"congruent", cong},
                            {"l", l},
                            {"tau", qe.at(l).get_str()},
                            {"valuation", val}});
    }
    rep["rows"] = rows;
    rep["all_congruent"] = all;
    if (saw_j_prime)
        rep["j_generator_min_valuation"] = min_val;
    if (c.n_max >= weight12_congruence_prime)
        rep["p_generator_valuation"] = p_generator_valuation(qe);
    return rep;
}

json run_showcase(const ShowcaseCfg& c) {
    json rep = base_report("showcase-691");
    rep["p"] = 691;
    rep["branch_omega_exp"] = 11;
    rep["prec_p"] = c.N;
    rep["prec_t"] = c.M;

    json stages;
    std::string stage = "delta-congruences";
    auto require = [&stage](bool ok, const std::string& msg) {
        if (!ok)
            throw StageFailure{stage, msg};
    };
    try {
        // Stage 1: weight-12 congruences from the exact q-expansion.
        const QExpansion qe = tau_coefficients(c.n_max);
        bool all = true;
        int min_val = std::numeric_limits<int>::max();
        long primes_checked = 0;
        for (long l = 2; l <= c.l_max; ++l) {
            if (!small_prime(l))
                continue;
            ++primes_checked;
            all = all && eisenstein_congruence(l, qe);
            if (l != weight12_congruence_prime)
                min_val = std::min(min_val, j_generator_valuation(l, qe));
        }
        require(primes_checked >= 1, "no primes at or below --lmax");
        require(all, "some tau(l) is not congruent to 1 + l^11 mod 691");
        require(c.n_max >= 691, "--nmax must reach 691 for the p-generator");
        const int pgen = p_generator_valuation(qe);
        require(pgen >= 1, "tau(691) - 1 should have positive 691-valuation");
        stages["delta_congruences"] = json{{"all_congruent", all},
                                           {"j_generator_min_valuation", min_val},
                                           {"l_max", c.l_max},
                                           {"n_max", c.n_max},
                                           {"p_generator_valuation", pgen},
                                           {"primes_checked", primes_checked}};

        // Stage 2: the omega^11 branch series and its invariants.
        stage = "kl-series";
        KLOptions opts;
        opts.cache_dir = resolve_cache_dir(c.cache_dir);
        const KLSeries kl = kl_series(691, 11, c.N, c.M, opts);
        const auto [mu, lambda] = iwasawa_invariants(kl);
        require(mu == 0 && lambda == 1,
                "expected (mu, lambda) = (0, 1), got (" + std::to_string(mu) +
                    ", " + std::to_string(lambda) + ")");
        const IdealFactorization fact = kl_factorization(kl, c.lambda_max);
        require(fact.certified,
                "the distinguished factor was not certified irreducible");
        stages["kl_series"] = json{{"factorization", fact_json(fact)},
                                   {"guaranteed_N", kl.guaranteed_N},
                                   {"lambda", lambda},
                                   {"mu", mu},
                                   {"series", series_json(kl.series)}};

        // Stage 3: weight-12 specialization against the exact Bernoulli value.
        stage = "weight-12-specialization";
        const PAdicInt got = kl.series.specialize(12);
        mpz_class p11;
        mpz_ui_pow_ui(p11.get_mpz_t(), 691, 11);
        const mpq_class oracle =
            -(1 - mpq_class(p11)) * bernoulli(12) / 12;
        const PAdicInt expect =
            PAdicInt::from_rational(oracle, 691, got.precision());
        require(got.congruent_to(expect),
                "specialization at weight 12 disagrees with "
                "-(1 - 691^11) * B_12 / 12");
        const Valuation v = got.valuation();
        require(v.exact() && v.value == 1,
                "the weight-12 value should have 691-valuation exactly 1");
        stages["weight_12"] = json{{"matches_bernoulli_oracle", true},
                                   {"valuation", v.value},
                                   {"value", got.residue().get_str()}};

        // Stage 4: the lattice-class count.
        stage = "lattice-count";
        const long n_free = count_free(fact);
        require(n_free == 2, "expected exactly 2 free stable lattice classes, "
                             "got " +
                                 std::to_string(n_free));
        stages["lattice_count"] = json{{"count_free", n_free}};

        // Stage 5: variation over twists of both parities.
        stage = "variation-sets";
        const VariationSet vo = variation_set(fact, TwistParity::Odd);
        const VariationSet ve = variation_set(fact, TwistParity::Even);
        require(vo.size() == 1, "odd-twist variation should be a singleton");
        require(ve.size() == 2, "even-twist variation should have 2 classes");
        stages["variation"] =
            json{{"even", variation_json(ve)}, {"odd", variation_json(vo)}};

        // Stage 6 (only when the unit-base hypothesis is asserted): the
        // L-value ideals themselves.
        if (c.unit_base) {
            stage = "unit-base-conclusion";
            const VariationSet ub = unit_base_variation(fact, true);
            require(ub.base == "1" && ub.size() == 2,
                    "the unit-base conclusion should be the 2 divisor ideals");
            json set = json::array();
            for (const DivisorTuple& t : ub.multipliers)
                set.push_back(divisor_string(fact, t));
            stages["unit_base_conclusion"] =
                json{{"set", set}, {"size", static_cast<long long>(ub.size())}};
        }
    } catch (const StageFailure&) {
        throw;
    } catch (const Error& e) {
        throw StageFailure{stage, e.code() + ": " + e.what()};
    }
    rep["stages"] = stages;
    json hyp = asserted_hypotheses();
    hyp["unit_base_holds"] = c.unit_base;
    rep["asserted_hypotheses"] = hyp;
    return rep;
}

// --------------------------------------------------------------------------
// human rendering (a formatting of the JSON model, never a separate path)
// --------------------------------------------------------------------------

std::string S(const json& j) { return j.get<std::string>(); }

const char* yes(const json& j) { return j.get<bool>() ? "yes" : "no"; }

void hypotheses_line(const json& rep, std::ostream& out) {
    if (!rep.contains("asserted_hypotheses"))
        return;
    out << "  hypotheses recorded as asserted input (not verified):";
    for (const auto& [key, value] : rep["asserted_hypotheses"].items()) {
        out << " " << key;
        if (!value.get<bool>())
            out << "=false";
    }
    out << "\n";
}

void human_irregular(const json& rep, std::ostream& out) {
    out << rep["count"] << " irregular pairs with p <= " << rep["p_max"]
        << "\n";
    for (const json& row : rep["pairs"])
        out << "  (" << row["p"] << ", " << row["k"] << ")\n";
}

void coefficients_line(const json& series, std::ostream& out) {
    out << "[";
    bool first = true;
    for (const json& c : series["coefficients"]) {
        if (!first)
            out << ", ";
        out << S(c);
        first = false;
    }
    out << "]";
}

void human_kl(const json& rep, std::ostream& out) {
    out << "Kubota-Leopoldt branch omega^" << rep["chi_omega_exp"]
        << " at p = " << rep["p"] << "\n";
    out << "  series mod (p^" << rep["guaranteed_N"] << ", T^" << rep["prec_t"]
        << "), coefficients lowest degree first:\n    ";
    coefficients_line(rep["series"], out);
    out << "\n";
    out << "  invariants: mu = " << rep["invariants"]["mu"]
        << ", lambda = " << rep["invariants"]["lambda"] << "\n";
    out << "  factorization: " << S(rep["factorization"]["ideal_string"])
        << " (certified: " << yes(rep["factorization"]["certified"]) << ")\n";
    if (rep.contains("verification")) {
        const json& v = rep["verification"];
        long ok = 0;
        for (const json& r : v["rows"])
            if (r["ok"].get<bool>())
                ++ok;
        out << "  verification: " << ok << "/" << v["rows"].size()
            << " interpolation rows ok (" << v["held_out_weights"]
            << " held-out weights)";
        if (!v["all_ok"].get<bool>()) {
            out << "; FAILED weights:";
            for (const json& r : v["rows"])
                if (!r["ok"].get<bool>())
                    out << " " << r["weight"];
        }
        out << "\n";
    }
}

void human_weierstrass(const json& rep, std::ostream& out) {
    out << "Weierstrass preparation at p = " << rep["p"] << ": f = p^"
        << rep["mu"] << " * D * U, lambda = " << rep["lambda"] << "\n";
    out << "  guaranteed mod p^" << rep["guaranteed_N"]
        << "; parts stored mod p^" << rep["part_N"] << "\n";
    out << "  D = " << S(rep["distinguished_string"]) << "\n";
    out << "  U coefficients: ";
    coefficients_line(rep["unit"], out);
    out << "\n";
    if (!rep["factors"].empty()) {
        out << "  factors of D:";
        for (const json& f : rep["factors"])
            out << " (" << S(f["poly_string"]) << ")^" << f["multiplicity"]
                << " [" << S(f["irreducibility"]) << ", certificate "
                << S(f["certificate"]) << "]";
        out << "\n";
    }
    if (rep.contains("specializations")) {
        out << "  specializations at u = " << S(rep["u"]) << ":\n";
        for (const json& r : rep["specializations"])
            out << "    weight " << r["weight"] << ": " << S(r["value"])
                << " (mod p^" << r["precision"] << ")\n";
    }
}

void human_lattice_count(const json& rep, std::ostream& out) {
    out << "free stable lattice classes: " << rep["count_free"] << "\n";
    out << "  ideal: " << S(rep["factorization"]["ideal_string"]) << "\n";
    out << "  divisor box side lengths: mu = " << rep["mu"]
        << ", distinguished exponents = ";
    if (rep["exponents"].empty()) {
        out << "(none)";
    } else {
        bool first = true;
        for (const json& e : rep["exponents"]) {
            if (!first)
                out << ", ";
            out << e;
            first = false;
        }
    }
    out << "\n";
    out << "  factor provenance: " << S(rep["source"]["factor_provenance"])
        << "\n";
    hypotheses_line(rep, out);
}

void human_lattice_graph(const json& rep, std::ostream& out) {
    out << "divisor lattice graph: " << rep["vertex_count"] << " vertices, "
        << rep["edge_count"] << " edges\n";
    out << "  ideal: " << S(rep["factorization"]["ideal_string"]) << "\n";
    out << "  vertices are divisor tuples from T_min "
        << rep["vertices"].front()["tuple"].dump() << " to T_max "
        << rep["vertices"].back()["tuple"].dump() << "\n";
    out << "  use --dot -/--json - to emit the graph itself\n";
    hypotheses_line(rep, out);
}

void human_dvr(const json& rep, std::ostream& out) {
    out << "representation at p = " << rep["p"] << " mod p^" << rep["N"]
        << ": generators";
    for (const json& l : rep["generators"])
        out << " " << S(l);
    out << " (distinguished: " << S(rep["g0"]) << ")\n";
    out << "  eigenvalues of the distinguished generator: lambda_1 = "
        << S(rep["eigenvalues"]["lambda_1"]) << ", lambda_2 = "
        << S(rep["eigenvalues"]["lambda_2"]) << "\n";
    if (rep.contains("reducible_within_precision")) {
        out << "  " << S(rep["note"]) << "\n";
        return;
    }
    const json& r = rep["reducibility"];
    out << "  reducibility ideal: ord = " << r["ord"];
    if (r["ord_is_lower_bound"].get<bool>())
        out << " (lower bound)";
    out << " = min val b (" << r["min_val_b"] << ", word \""
        << S(r["witness"]["b_word"]) << "\") + min val c (" << r["min_val_c"]
        << ", word \"" << S(r["witness"]["c_word"]) << "\")\n";
    out << "  saturation: " << S(r["saturation"]) << " after "
        << r["examined_words"] << " distinct words\n";
    if (rep.contains("note"))
        out << "  " << S(rep["note"]) << "\n";
    if (rep.contains("count_classes"))
        out << "  stable lattice classes: " << rep["count_classes"] << "\n";
    if (rep.contains("residual_characters")) {
        const json& rc = rep["residual_characters"];
        out << "  residual characters mod p^" << rc["modulus_exponent"]
            << " on generators:";
        for (const auto& [label, v] : rc["theta_1"].items())
            out << " theta_1(" << label << ") = " << S(v);
        for (const auto& [label, v] : rc["theta_2"].items())
            out << " theta_2(" << label << ") = " << S(v);
        out << "\n";
    }
    if (rep.contains("chain")) {
        const json& ch = rep["chain"];
        out << "  chain: " << ch["length"]
            << " nested lattices with cyclic quotients of type "
            << S(ch["quotient_type"]) << "; stability:";
        for (const json& s : ch["stability"])
            out << " " << S(s);
        out << "\n";
    }
}

void human_delta(const json& rep, std::ostream& out) {
    out << "Ramanujan tau congruences mod " << rep["modulus"]
        << " (q-expansion to n = " << rep["n_max"] << ")\n";
    for (const json& r : rep["rows"])
        out << "  l = " << r["l"] << ": tau = " << S(r["tau"])
            << ", congruent to 1 + l^11: " << yes(r["congruent"])
            << ", generator valuation " << r["valuation"] << "\n";
    out << "  all primes l <= " << rep["l_max"]
        << " congruent: " << yes(rep["all_congruent"]) << "\n";
    if (rep.contains("j_generator_min_valuation"))
        out << "  minimal generator valuation over tested primes: "
            << rep["j_generator_min_valuation"] << "\n";
    if (rep.contains("p_generator_valuation"))
        out << "  val(tau(691) - 1) = " << rep["p_generator_valuation"]
            << "\n";
}

void human_showcase(const json& rep, std::ostream& out) {
    out << "Delta/691 end-to-end run (branch omega^" << rep["branch_omega_exp"]
        << ", mod (691^" << rep["prec_p"] << ", T^" << rep["prec_t"] << "))\n";
    const json& st = rep["stages"];
    const json& d = st["delta_congruences"];
    out << "  [delta-congruences] " << d["primes_checked"]
        << " primes up to " << d["l_max"]
        << ": all tau(l) = 1 + l^11 mod 691: " << yes(d["all_congruent"])
        << "; min generator valuation " << d["j_generator_min_valuation"]
        << "; val(tau(691) - 1) = " << d["p_generator_valuation"] << "\n";
    const json& k = st["kl_series"];
    out << "  [kl-series] mu = " << k["mu"] << ", lambda = " << k["lambda"]
        << "; factorization " << S(k["factorization"]["ideal_string"])
        << " (certified: " << yes(k["factorization"]["certified"]) << ")\n";
    const json& w = st["weight_12"];
    out << "  [weight-12-specialization] 691-valuation " << w["valuation"]
        << ", matches the exact Bernoulli oracle: "
        << yes(w["matches_bernoulli_oracle"]) << "\n";
    out << "  [lattice-count] free stable lattice classes: "
        << st["lattice_count"]["count_free"] << "\n";
    const json& v = st["variation"];
    out << "  [variation-sets] odd twists: " << v["odd"]["size"]
        << " class (base " << S(v["odd"]["base"]) << "); even twists: "
        << v["even"]["size"] << " classes\n";
    if (st.contains("unit_base_conclusion")) {
        const json& u = st["unit_base_conclusion"];
        out << "  [unit-base-conclusion] L-value ideal set {";
        bool first = true;
        for (const json& s : u["set"]) {
            if (!first)
                out << ", ";
            out << S(s);
            first = false;
        }
        out << "} (size " << u["size"] << ")\n";
    }
    hypotheses_line(rep, out);
}

void render_human(const json& rep, std::ostream& out) {
    const std::string cmd = S(rep["command"]);
    if (cmd == "irregular-pairs")
        human_irregular(rep, out);
    else if (cmd == "kl")
        human_kl(rep, out);
    else if (cmd == "weierstrass")
        human_weierstrass(rep, out);
    else if (cmd == "lattice-count")
        human_lattice_count(rep, out);
    else if (cmd == "lattice-graph")
        human_lattice_graph(rep, out);
    else if (cmd == "dvr-analyze")
        human_dvr(rep, out);
    else if (cmd == "delta-check")
        human_delta(rep, out);
    else
        human_showcase(rep, out);
}

void emit(const json& rep, bool json_out, std::ostream& out) {
    if (json_out)
        out << rep.dump(2) << "\n";
    else
        render_human(rep, out);
}

/// Write `content` to a file, or to `out` when the path is "-".
void write_output(const std::string& path, const std::string& content,
                  std::ostream& out, const char* flag) {
    if (path == "-") {
        out << content;
        return;
    }
    std::ofstream f(path);
    if (!f)
        throw UsageError{std::string(flag) + ": cannot write \"" + path +
                         "\""};
    f << content;
    f.flush();
    if (!f)
        throw UsageError{std::string(flag) + ": error writing \"" + path +
                         "\""};
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"stable lattices over the Iwasawa algebra: irregular pairs, "
                 "p-adic L-series, Weierstrass preparation, reducibility "
                 "ideals, and divisor-graph combinatorics"};
    app.name("ilat");
    app.require_subcommand(1);

    IrregularCfg irr_cfg;
    auto* irr = app.add_subcommand(
        "irregular-pairs", "scan the Bernoulli numbers B_2..B_{p-3} mod p for "
                           "irregular pairs (p, k)");
    irr->add_option("--pmax", irr_cfg.p_max, "largest prime to scan")
        ->required()
        ->check(CLI::PositiveNumber);
    irr->add_flag("--json", irr_cfg.json_out, "emit the JSON report");

    KlCfg kl_cfg;
    auto* klc = app.add_subcommand(
        "kl", "construct one odd branch of the Kubota-Leopoldt p-adic "
              "L-function as a truncated series");
    klc->add_option("--p", kl_cfg.p, "odd prime")
        ->required()
        ->check(CLI::PositiveNumber);
    klc->add_option("--chi-omega-exp", kl_cfg.j,
                    "branch character exponent j of omega^j (odd)")
        ->required()
        ->check(CLI::PositiveNumber);
    klc->add_option("--prec-p", kl_cfg.N, "p-adic precision N")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    klc->add_option("--prec-t", kl_cfg.M, "T-adic truncation M")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    klc->add_option("--lambda-max", kl_cfg.lambda_max,
                    "largest distinguished degree to factor")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    klc->add_option("--cache-dir", kl_cfg.cache_dir,
                    "series cache directory (ILAT_CACHE_DIR overrides)");
    klc->add_flag("--verify", kl_cfg.verify,
                  "recompute both sides of the interpolation identity, "
                  "including held-out weights");
    klc->add_flag("--json", kl_cfg.json_out, "emit the JSON report");

    WeierCfg w_cfg;
    auto* wei = app.add_subcommand(
        "weierstrass", "Weierstrass preparation p^mu * D * U of a truncated "
                       "series given by its coefficients");
    wei->add_option("--p", w_cfg.p, "odd prime")
        ->required()
        ->check(CLI::PositiveNumber);
    wei->add_option("--coeffs", w_cfg.coeffs,
                    "comma-separated integer coefficients, lowest degree "
                    "first")
        ->required();
    wei->add_option("--prec-p", w_cfg.N, "p-adic precision N")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    wei->add_option("--prec-t", w_cfg.M, "T-adic truncation M")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    wei->add_option("--lambda-max", w_cfg.lambda_max,
                    "largest distinguished degree to factor")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    auto* spec_opt =
        wei->add_option("--specialize", w_cfg.specialize,
                        "weights k >= 2 at which to evaluate the series")
            ->check(CLI::Range(2L, 1000000L));
    wei->add_option("--u", w_cfg.u,
                    "topological generator value (default 1 + p)")
        ->needs(spec_opt);
    wei->add_flag("--json", w_cfg.json_out, "emit the JSON report");

    LatticeCfg lc_cfg;
    auto* lc = app.add_subcommand(
        "lattice-count", "number of free stable lattice classes governed by "
                         "an ideal factorization");
    auto wire_lattice_inputs = [](CLI::App* sub, LatticeCfg& cfg) {
        auto* mu = sub->add_option("--mu", cfg.mu, "exponent of (p)")
                       ->check(CLI::NonNegativeNumber);
        auto* factors = sub->add_option(
            "--factors", cfg.factors,
            "distinguished factors as \"poly:mult,poly:mult\", e.g. "
            "\"T+686:1,T+5:2\"");
        sub->add_option("--p", cfg.p,
                        "prime labeling synthetic factors (the counts depend "
                        "only on the exponents)")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        sub->add_option("--prec-p", cfg.prec_p,
                        "residue precision for synthetic factors")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        auto* fk = sub->add_option(
            "--from-kl", cfg.from_kl,
            "take the ideal from a branch series: \"p,j,N,M\"");
        fk->excludes(mu)->excludes(factors);
        sub->add_option("--cache-dir", cfg.cache_dir,
                        "series cache directory for --from-kl "
                        "(ILAT_CACHE_DIR overrides)");
        sub->add_option("--lambda-max", cfg.lambda_max,
                        "largest distinguished degree to factor")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        return mu;
    };
    auto* lc_mu = wire_lattice_inputs(lc, lc_cfg);
    lc->add_flag("--json", lc_cfg.json_out, "emit the JSON report");

    LatticeCfg lg_cfg;
    auto* lg = app.add_subcommand(
        "lattice-graph", "divisor lattice of an ideal factorization as an "
                         "undirected graph");
    auto* lg_mu = wire_lattice_inputs(lg, lg_cfg);
    lg->add_option("--dot", lg_cfg.dot_path,
                   "write Graphviz DOT to this path (\"-\" for stdout)");
    lg->add_option("--json", lg_cfg.json_path,
                   "write the JSON report to this path (\"-\" for stdout)");

    auto* dvr = app.add_subcommand(
        "dvr", "discrete-valuation-ring representation analysis");
    dvr->require_subcommand(1);
    DvrCfg dvr_cfg;
    auto* dva = dvr->add_subcommand(
        "analyze", "reducibility ideal, class count, residual characters, "
                   "and lattice chain of a 2-dimensional representation");
    dva->add_option("--rep", dvr_cfg.rep_path,
                    "JSON file with {\"p\", \"N\", \"g0\", \"generators\"}")
        ->required()
        ->check(CLI::ExistingFile);
    dva->add_option("--word-bound", dvr_cfg.word_bound,
                    "maximum semigroup word length")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    dva->add_flag("--chain", dvr_cfg.chain,
                  "also emit the nested chain of stable lattices");
    dva->add_flag("--json", dvr_cfg.json_out, "emit the JSON report");

    auto* delta = app.add_subcommand(
        "delta", "Ramanujan Delta q-expansion fixtures");
    delta->require_subcommand(1);
    DeltaCfg delta_cfg;
    auto* dck = delta->add_subcommand(
        "check", "tau(l) = 1 + l^11 mod 691 for primes l, with generator "
                 "valuations");
    dck->add_option("--lmax", delta_cfg.l_max, "largest prime to test")
        ->required()
        ->check(CLI::PositiveNumber);
    dck->add_option("--nmax", delta_cfg.n_max, "q-expansion length")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    dck->add_flag("--json", delta_cfg.json_out, "emit the JSON report");

    ShowcaseCfg sc_cfg;
    auto* sc = app.add_subcommand(
        "showcase-691", "end-to-end run of the Delta/691 worked example");
    sc->add_option("--prec-p", sc_cfg.N, "p-adic precision N")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sc->add_option("--prec-t", sc_cfg.M, "T-adic truncation M")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sc->add_option("--lmax", sc_cfg.l_max, "largest prime for the congruence "
                                           "stage")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sc->add_option("--nmax", sc_cfg.n_max, "q-expansion length")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sc->add_option("--cache-dir", sc_cfg.cache_dir,
                   "series cache directory (ILAT_CACHE_DIR overrides)");
    sc->add_option("--lambda-max", sc_cfg.lambda_max,
                   "largest distinguished degree to factor")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sc->add_flag("--unit-base", sc_cfg.unit_base,
                 "assert that the minimal class's L-value is a unit and "
                 "report the resulting ideal set");
    sc->add_flag("--json", sc_cfg.json_out, "emit the JSON report");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (irr->parsed()) {
            emit(run_irregular(irr_cfg), irr_cfg.json_out, out);
        } else if (klc->parsed()) {
            emit(run_kl(kl_cfg), kl_cfg.json_out, out);
        } else if (wei->parsed()) {
            emit(run_weierstrass(w_cfg), w_cfg.json_out, out);
        } else if (lc->parsed()) {
            lc_cfg.mu_given = lc_mu->count() > 0;
            emit(run_lattice_count(lc_cfg), lc_cfg.json_out, out);
        } else if (lg->parsed()) {
            lg_cfg.mu_given = lg_mu->count() > 0;
            if (lg_cfg.dot_path == "-" && lg_cfg.json_path == "-")
                throw UsageError{
                    "--dot and --json cannot both write to stdout"};
            std::string dot;
            const json rep = run_lattice_graph(lg_cfg, &dot);
            if (!lg_cfg.dot_path.empty())
                write_output(lg_cfg.dot_path, dot, out, "--dot");
            if (!lg_cfg.json_path.empty())
                write_output(lg_cfg.json_path, rep.dump(2) + "\n", out,
                             "--json");
            if (lg_cfg.dot_path.empty() && lg_cfg.json_path.empty())
                render_human(rep, out);
        } else if (dva->parsed()) {
            emit(run_dvr(dvr_cfg), dvr_cfg.json_out, out);
        } else if (dck->parsed()) {
            emit(run_delta(delta_cfg), delta_cfg.json_out, out);
        } else if (sc->parsed()) {
            emit(run_showcase(sc_cfg), sc_cfg.json_out, out);
        }
        return 0;
    } catch (const UsageError& u) {
        err << "usage error: " << u.message << "\n";
        return 2;
    } catch (const StageFailure& s) {
        json je;
        je["schema_version"] = kSchemaVersion;
        je["error"] = json{{"code", "StageFailure"},
                           {"message", "stage " + s.stage + ": " + s.message},
                           {"stage", s.stage}};
        err << je.dump() << "\n";
        return 1;
    } catch (const Error& e) {
        json je;
        je["schema_version"] = kSchemaVersion;
        je["error"] = json{{"code", e.code()}, {"message", e.what()}};
        err << je.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        json je;
        je["schema_version"] = kSchemaVersion;
        je["error"] = json{{"code", "InternalError"}, {"message", e.what()}};
        err << je.dump() << "\n";
        return 1;
    }
}

} // namespace ilat::cli
