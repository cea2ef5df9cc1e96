#include "ilat/kubota_leopoldt.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <system_error>

#include "ilat/errors.hpp"

namespace ilat {

namespace {

int val_p_long(long n, long p) {
    int v = 0;
    while (n != 0 && n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

long normalized_branch(long p, long j) {
    const long order = p - 1;
    const long jn = ((j % order) + order) % order;
    if (jn % 2 == 0)
        throw EvenCharacter(
            "the branch exponent must be odd (omega^j odd, omega^{j+1} even)");
    return jn;
}

/// Exact loss of the in-place divided-difference triangle on consecutive
/// integer weights: sum_{c=1}^{n} (1 + val_p(c)) = n + val_p(n!).
int triangle_loss(int n, long p) {
    int loss = n;
    for (long q = p; q <= n; q *= p) loss += n / static_cast<int>(q);
    return loss;
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string checksum_hex(const std::string& payload) {
    std::ostringstream os;
    os << std::hex << fnv1a64(payload);
    return os.str();
}

std::filesystem::path cache_entry_path(const std::string& dir, long p, long j,
                                       int N, int M) {
    std::ostringstream name;
    name << "kl-p" << p << "-j" << j << "-N" << N << "-M" << M << ".v1.txt";
    return std::filesystem::path(dir) / name.str();
}

std::string cache_payload(long p, long j, int N, const KLSeries& kl) {
    std::ostringstream os;
    os << p << ' ' << j << ' ' << N << ' ' << kl.series.truncation() << ' '
       << kl.guaranteed_N << '\n';
    for (const mpz_class& c : kl.series.coefficients()) os << c << '\n';
    return os.str();
}

std::optional<KLSeries> load_cached(const std::filesystem::path& path, long p,
                                    long j, int N, int M) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string text{std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>()};

    // Last line is "sum <hex>" over everything before it.
    const auto mark = text.rfind("sum ");
    if (mark == std::string::npos || mark == 0 || text[mark - 1] != '\n')
        return std::nullopt;
    const std::string payload = text.substr(0, mark);
    std::istringstream tail(text.substr(mark + 4));
    std::string hex;
    tail >> hex;
    if (hex != checksum_hex(payload)) return std::nullopt;

    try {
        std::istringstream body(payload);
        long fp = 0, fj = 0;
        int fN = 0, fM = 0, fg = 0;
        if (!(body >> fp >> fj >> fN >> fM >> fg)) return std::nullopt;
        if (fp != p || fj != j || fN != N || fM != M) return std::nullopt;
        if (fg < 1 || fg > fN + 1) return std::nullopt;
        std::vector<mpz_class> coeffs;
        coeffs.reserve(static_cast<size_t>(fM));
        for (int i = 0; i < fM; ++i) {
            std::string tok;
            if (!(body >> tok)) return std::nullopt;
            coeffs.emplace_back(tok); // throws on malformed digits
        }
        return KLSeries{OmegaPowerCharacter(p, j),
                        IwasawaSeries(p, fg, fM, std::move(coeffs)), fg,
                        KLConstruction::InterpolationSolve};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

/// Best effort: a cache that cannot be written must not fail the computation.
void store_cached(const std::filesystem::path& path, long p, long j, int N,
                  const KLSeries& kl) {
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    const std::string payload = cache_payload(p, j, N, kl);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) return;
        out << payload << "sum " << checksum_hex(payload) << '\n';
        if (!out) {
            out.close();
            std::filesystem::remove(tmp, ec);
            return;
        }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

} // namespace

PAdicInt kl_special_value(long p, long j, long k, int N) {
    check_pN(p, N);
    if (k < 2) throw RangeError("interpolation weights start at k = 2");
    const long jn = normalized_branch(p, j);

    const long m = (jn + 1) % (p - 1);
    if (m != 0) return lp_value(p, m, k, N);

    // j == -1: (u^k - 1) L_p(1-k, omega^{1-k}) with the pole cleared.  Both
    // u^k - 1 and p*k have valuation exactly e = 1 + val_p(k), so working e
    // digits up makes the division exact.
    const int e = 1 + val_p_long(k, p);
    const int Nw = N + e;

    PAdicInt x = generalized_bernoulli_times_p(k, OmegaPowerCharacter(p, -k), Nw);
    if (k % (p - 1) == 0) {
        // Twist of conductor 1 at this weight: Euler factor 1 - p^{k-1}.
        x = x * PAdicInt(p, Nw, 1 - p_power(p, k - 1));
    }
    const PAdicInt u = default_one_unit(p, Nw);
    x = x * (u.pow(k) - PAdicInt::one(p, Nw));

    long k_unit = k;
    for (int i = 1; i < e; ++i) k_unit /= p;
    return -(x.shifted_down(e) * PAdicInt(p, N, k_unit).inverse());
}

KLSeries kl_series(long p, long j, int N, int M, const KLOptions& opts) {
    if (N < 2 || M < 2)
        throw RangeError("branch series need N >= 2 and M >= 2");
    check_pN(p, N);
    const long jn = normalized_branch(p, j);

    const bool canonical = opts.alternate_nodes == 0 && opts.extra_working == 0;
    std::filesystem::path entry;
    if (canonical && !opts.cache_dir.empty()) {
        entry = cache_entry_path(opts.cache_dir, p, jn, N, M);
        if (auto hit = load_cached(entry, p, jn, N, M)) return *hit;
    }

    // Sample N weights past the kept window so that truncating the fitted
    // polynomial at T^M leaves every kept coefficient honest mod p^{N+1}.
    const int Mw = M + N;
    const int loss = triangle_loss(Mw - 1, p);
    const int Nw = N + loss + opts.extra_working;
    if (Nw > opts.working_ceiling) {
        std::ostringstream msg;
        msg << "interpolation on " << Mw << " nodes needs working precision "
            << Nw << " > ceiling " << opts.working_ceiling;
        throw InsufficientPrecision(msg.str());
    }

    const PAdicInt u = default_one_unit(p, Nw);
    const PAdicInt one = PAdicInt::one(p, Nw);
    std::vector<PAdicInt> t, dd;
    t.reserve(static_cast<size_t>(Mw));
    dd.reserve(static_cast<size_t>(Mw));
    for (int d = 0; d < Mw; ++d) {
        const long k = 2 + opts.alternate_nodes + d;
        t.push_back(u.pow(k - 2) - one);
        dd.push_back(kl_special_value(p, jn, k, Nw));
    }

    // Newton divided differences in place.  Column c divides by
    // t[r] - t[r-c] = u^{...} (u^c - 1) of valuation exactly 1 + val_p(c);
    // the quotients are genuine elements of Z_p, so the shift is exact.
    for (int c = 1; c < Mw; ++c) {
        const int e = 1 + val_p_long(c, p);
        for (int r = Mw - 1; r >= c; --r) {
            const PAdicInt num = dd[static_cast<size_t>(r)] -
                                 dd[static_cast<size_t>(r - 1)];
            const PAdicInt den = t[static_cast<size_t>(r)] -
                                 t[static_cast<size_t>(r - c)];
            dd[static_cast<size_t>(r)] =
                num.shifted_down(e) * den.shifted_down(e).inverse();
        }
    }

    // Newton form -> monomial coefficients by Horner from the top.
    std::vector<PAdicInt> poly{dd[static_cast<size_t>(Mw - 1)]};
    for (int d = Mw - 2; d >= 0; --d) {
        std::vector<PAdicInt> next(poly.size() + 1, PAdicInt::zero(p, Nw));
        for (size_t s = 0; s < poly.size(); ++s) {
            next[s + 1] = next[s + 1] + poly[s];
            next[s] = next[s] - poly[s] * t[static_cast<size_t>(d)];
        }
        next[0] = next[0] + dd[static_cast<size_t>(d)];
        poly = std::move(next);
    }

    // Keep degrees < M.  Guaranteed digits: the coefficient residues carry
    // N + extra_working, and the discarded tail perturbs coefficient i by
    // valuation >= Mw - i >= N + 1.
    int gN = N + 1;
    for (int i = 0; i < M; ++i)
        gN = std::min(gN, poly[static_cast<size_t>(i)].precision());
    std::vector<mpz_class> coeffs;
    coeffs.reserve(static_cast<size_t>(M));
    for (int i = 0; i < M; ++i)
        coeffs.push_back(poly[static_cast<size_t>(i)].residue());

    KLSeries out{OmegaPowerCharacter(p, jn),
                 IwasawaSeries(p, gN, M, std::move(coeffs)), gN,
                 canonical ? KLConstruction::InterpolationSolve
                           : KLConstruction::AlternateRun};
    if (!entry.empty()) store_cached(entry, p, jn, N, out);
    return out;
}

std::pair<int, int> iwasawa_invariants(const KLSeries& kl) {
    const WeierstrassFactorization wf = weierstrass(kl.series);
    return {wf.mu, wf.lambda};
}

IdealFactorization kl_factorization(const KLSeries& kl, int lambda_max) {
    const WeierstrassFactorization wf = weierstrass(kl.series);
    IdealFactorization out;
    out.mu = wf.mu;
    out.certified = true;
    if (wf.lambda == 0) return out;

    DistinguishedFactorization df =
        factor_distinguished(wf.distinguished, wf.p, wf.part_N, lambda_max);
    out.factors = std::move(df.factors);
    for (const PrimeFactorMult& f : out.factors)
        if (f.prime.irreducibility != Irreducibility::Certified)
            out.certified = false;
    return out;
}

std::vector<InterpolationCheck> verify_interpolation(
    const KLSeries& kl, const std::vector<long>& weights) {
    const long p = kl.chi.p;
    const int prec = std::min(kl.guaranteed_N, kl.series.truncation());
    std::vector<InterpolationCheck> out;
    out.reserve(weights.size());
    for (const long k : weights) {
        InterpolationCheck row;
        row.weight = k;
        row.precision = prec;
        row.lhs = kl.series.specialize(static_cast<int>(k));
        row.rhs = kl_special_value(p, kl.chi.j, k, prec);
        row.ok = row.lhs.congruent_to(row.rhs);
        out.push_back(row);
    }
    return out;
}

} // namespace ilat
