#include "ilat/iwasawa.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "ilat/errors.hpp"

namespace ilat {

namespace {

using Vec = std::vector<mpz_class>;

Vec reduce_vec(Vec v, const mpz_class& pN, int M) {
    v.resize(static_cast<size_t>(M), mpz_class(0));
    for (auto& c : v) {
        mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), pN.get_mpz_t());
    }
    return v;
}

/// Valuation of a canonical residue mod p^N; N stands in for "zero residue".
int residue_val(const mpz_class& r, long p, int N) {
    if (r == 0) return N;
    mpz_class t = r;
    int v = 0;
    while (v < N && mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return v;
}

bool vec_is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const mpz_class& c) { return c == 0; });
}

Vec vec_add(const Vec& a, const Vec& b, const mpz_class& pN, int M) {
    Vec out(static_cast<size_t>(M), mpz_class(0));
    for (int i = 0; i < M; ++i) {
        mpz_class s = a[static_cast<size_t>(i)] + b[static_cast<size_t>(i)];
        mpz_fdiv_r(s.get_mpz_t(), s.get_mpz_t(), pN.get_mpz_t());
        out[static_cast<size_t>(i)] = s;
    }
    return out;
}

Vec vec_sub(const Vec& a, const Vec& b, const mpz_class& pN, int M) {
    Vec out(static_cast<size_t>(M), mpz_class(0));
    for (int i = 0; i < M; ++i) {
        mpz_class s = a[static_cast<size_t>(i)] - b[static_cast<size_t>(i)];
        mpz_fdiv_r(s.get_mpz_t(), s.get_mpz_t(), pN.get_mpz_t());
        out[static_cast<size_t>(i)] = s;
    }
    return out;
}

/// Cauchy product truncated to T^M.
Vec vec_mul(const Vec& a, const Vec& b, const mpz_class& pN, int M) {
    Vec out(static_cast<size_t>(M), mpz_class(0));
    const int da = static_cast<int>(a.size());
    const int db = static_cast<int>(b.size());
    for (int i = 0; i < std::min(da, M); ++i) {
        if (a[static_cast<size_t>(i)] == 0) continue;
        const int jmax = std::min(db, M - i);
        for (int j = 0; j < jmax; ++j) {
            out[static_cast<size_t>(i + j)] +=
                a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
        }
    }
    for (auto& c : out) {
        mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), pN.get_mpz_t());
    }
    return out;
}

/// Multiplicative inverse in (Z/p^N)[T]/T^M; requires a unit constant term.
Vec series_inv(const Vec& a, const mpz_class& pN, int M) {
    Vec b(static_cast<size_t>(M), mpz_class(0));
    mpz_class inv0;
    if (mpz_invert(inv0.get_mpz_t(), a[0].get_mpz_t(), pN.get_mpz_t()) == 0) {
        throw NotAUnit("series inverse requires a unit constant term");
    }
    b[0] = inv0;
    for (int k = 1; k < M; ++k) {
        mpz_class acc = 0;
        for (int i = 1; i <= k; ++i) {
            if (static_cast<size_t>(i) < a.size()) {
                acc += a[static_cast<size_t>(i)] * b[static_cast<size_t>(k - i)];
            }
        }
        acc = -acc * inv0;
        mpz_fdiv_r(acc.get_mpz_t(), acc.get_mpz_t(), pN.get_mpz_t());
        b[static_cast<size_t>(k)] = acc;
    }
    return b;
}

/**
 * Weierstrass division h = q*g + r with deg r < lambda in (Z/p^N)[T]/T^M.
 *
 * Requires: the coefficient of T^lambda in g is a unit and the coefficients
 * below degree lambda have valuation >= 1 (that gap is what makes each pass
 * gain a power of p in the unquotiented part, so at most N passes run).
 * The quotient q is the canonical one supported in degrees < M - lambda.
 */
void wdivide(const Vec& h, const Vec& g, int lambda, long p, int N,
             const mpz_class& pN, int M, Vec& q, Vec& r) {
    assert(lambda < M);
    Vec Bp(g.begin() + lambda, g.end());
    Bp.resize(static_cast<size_t>(M), mpz_class(0));
    const Vec Binv = series_inv(Bp, pN, M);

    q.assign(static_cast<size_t>(M), mpz_class(0));
    Vec res = reduce_vec(h, pN, M);
    for (int round = 0; round <= N + 1; ++round) {
        Vec hi(res.begin() + lambda, res.end());
        hi.resize(static_cast<size_t>(M), mpz_class(0));
        if (vec_is_zero(hi)) {
            r.assign(res.begin(), res.begin() + lambda);
            return;
        }
        Vec q1 = vec_mul(hi, Binv, pN, M);
        std::fill(q1.begin() + (M - lambda), q1.end(), mpz_class(0));
        q = vec_add(q, q1, pN, M);
        res = vec_sub(res, vec_mul(q1, g, pN, M), pN, M);
    }
    (void)p;
    throw std::logic_error("weierstrass division failed to terminate");
}

int poly_degree(const Vec& v) {
    for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i) {
        if (v[static_cast<size_t>(i)] != 0) return i;
    }
    return -1;
}

/// Newton iteration for a root of E near y0, where E'(y0) is a unit mod p.
mpz_class hensel_root(const Vec& E, long p, int NE, long y0) {
    const mpz_class pNE = p_power(p, NE);
    Vec dE;
    for (size_t i = 1; i < E.size(); ++i) {
        dE.push_back(static_cast<long>(i) * E[i]);
    }
    mpz_class y = y0;
    for (int it = 0; it < NE + 2; ++it) {
        mpz_class fy = poly_eval_mod(E, y, pNE);
        if (fy == 0) break;
        mpz_class dy = poly_eval_mod(dE, y, pNE);
        mpz_class dinv;
        if (mpz_invert(dinv.get_mpz_t(), dy.get_mpz_t(), pNE.get_mpz_t()) == 0) {
            throw std::logic_error("hensel_root: derivative lost invertibility");
        }
        y -= fy * dinv;
        mpz_fdiv_r(y.get_mpz_t(), y.get_mpz_t(), pNE.get_mpz_t());
    }
    return y;
}

/// Divide by the monic linear (T - x); returns the remainder value R(x).
mpz_class synthetic_divide(const Vec& R, const mpz_class& x, const mpz_class& pN,
                           Vec& quotient) {
    const int d = static_cast<int>(R.size()) - 1;
    quotient.assign(static_cast<size_t>(d), mpz_class(0));
    mpz_class carry = R[static_cast<size_t>(d)];
    for (int i = d - 1; i >= 0; --i) {
        quotient[static_cast<size_t>(i)] = carry;
        carry = R[static_cast<size_t>(i)] + x * carry;
        mpz_fdiv_r(carry.get_mpz_t(), carry.get_mpz_t(), pN.get_mpz_t());
    }
    return carry;
}

/// Lower convex hull of (i, v_i); returns the hull vertices left to right.
std::vector<std::pair<long, long>> newton_hull(const std::vector<long>& vals) {
    std::vector<std::pair<long, long>> hull;
    for (size_t i = 0; i < vals.size(); ++i) {
        const std::pair<long, long> pt{static_cast<long>(i), vals[i]};
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // b stays only if a->b->pt turns left (b dips below the chord);
            // popping on collinear merges points into one segment
            const long cross = (b.first - a.first) * (pt.second - a.second) -
                               (b.second - a.second) * (pt.first - a.first);
            if (cross <= 0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(pt);
    }
    return hull;
}

} // namespace

std::vector<mpz_class> poly_mul_mod(const std::vector<mpz_class>& a,
                                    const std::vector<mpz_class>& b,
                                    const mpz_class& mod) {
    if (a.empty() || b.empty()) return {};
    Vec out(a.size() + b.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    for (auto& c : out) {
        mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
    }
    return out;
}

mpz_class poly_eval_mod(const std::vector<mpz_class>& poly, const mpz_class& x,
                        const mpz_class& mod) {
    mpz_class acc = 0;
    for (size_t i = poly.size(); i-- > 0;) {
        acc = acc * x + poly[i];
        mpz_fdiv_r(acc.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
    }
    return acc;
}

IwasawaSeries::IwasawaSeries(long p, int N, int M) : p_(p), N_(N), M_(M) {
    check_pN(p, N);
    if (M < 1) throw std::invalid_argument("truncation length M must be >= 1");
    c_.assign(static_cast<size_t>(M), mpz_class(0));
}

IwasawaSeries::IwasawaSeries(long p, int N, int M, std::vector<mpz_class> coeffs)
    : IwasawaSeries(p, N, M) {
    coeffs.resize(static_cast<size_t>(M), mpz_class(0));
    c_ = reduce_vec(std::move(coeffs), p_power(p, N), M);
}

IwasawaSeries IwasawaSeries::constant(const PAdicInt& c, int M) {
    IwasawaSeries f(c.prime(), c.precision(), M);
    f.c_[0] = c.residue();
    return f;
}

IwasawaSeries IwasawaSeries::variable(long p, int N, int M) {
    IwasawaSeries f(p, N, M);
    if (M < 2) throw std::invalid_argument("T needs truncation length M >= 2");
    f.c_[1] = 1;
    return f;
}

PAdicInt IwasawaSeries::coefficient(int i) const {
    if (i < 0 || i >= M_) throw RangeError("coefficient index out of range");
    return PAdicInt(p_, N_, c_[static_cast<size_t>(i)]);
}

bool IwasawaSeries::is_zero() const { return vec_is_zero(c_); }

int IwasawaSeries::min_valuation() const {
    int best = N_;
    for (const auto& c : c_) {
        best = std::min(best, residue_val(c, p_, N_));
        if (best == 0) break;
    }
    return best;
}

IwasawaSeries IwasawaSeries::truncated_N(int N2) const {
    if (N2 < 1) throw std::invalid_argument("precision must be >= 1");
    if (N2 > N_) throw InsufficientPrecision("cannot raise precision of a series");
    return IwasawaSeries(p_, N2, M_, c_);
}

IwasawaSeries IwasawaSeries::truncated_M(int M2) const {
    if (M2 < 1 || M2 > M_) throw std::invalid_argument("bad truncation length");
    return IwasawaSeries(p_, N_, M2,
                         std::vector<mpz_class>(c_.begin(), c_.begin() + M2));
}

IwasawaSeries IwasawaSeries::shifted_down_p(int k) const {
    if (k < 0) throw std::invalid_argument("shift must be >= 0");
    if (k == 0) return *this;
    if (k >= N_) throw InsufficientPrecision("p-shift consumes all precision");
    if (min_valuation() < k) throw NotAUnit("series is not divisible by p^k");
    const mpz_class pk = p_power(p_, k);
    IwasawaSeries out(p_, N_ - k, M_);
    for (int i = 0; i < M_; ++i) {
        mpz_divexact(out.c_[static_cast<size_t>(i)].get_mpz_t(),
                     c_[static_cast<size_t>(i)].get_mpz_t(), pk.get_mpz_t());
    }
    return out;
}

void IwasawaSeries::require_compatible(const IwasawaSeries& g) const {
    if (p_ != g.p_) throw PrecisionMismatch("series have different primes");
}

IwasawaSeries IwasawaSeries::operator-() const {
    IwasawaSeries out(p_, N_, M_);
    const mpz_class pN = p_power(p_, N_);
    for (int i = 0; i < M_; ++i) {
        mpz_class v = -c_[static_cast<size_t>(i)];
        mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), pN.get_mpz_t());
        out.c_[static_cast<size_t>(i)] = v;
    }
    return out;
}

IwasawaSeries IwasawaSeries::operator+(const IwasawaSeries& g) const {
    require_compatible(g);
    const int N = std::min(N_, g.N_);
    const int M = std::min(M_, g.M_);
    IwasawaSeries out(p_, N, M);
    out.c_ = vec_add(reduce_vec(c_, p_power(p_, N), M),
                     reduce_vec(g.c_, p_power(p_, N), M), p_power(p_, N), M);
    return out;
}

IwasawaSeries IwasawaSeries::operator-(const IwasawaSeries& g) const {
    return *this + (-g);
}

IwasawaSeries IwasawaSeries::operator*(const IwasawaSeries& g) const {
    require_compatible(g);
    const int N = std::min(N_, g.N_);
    const int M = std::min(M_, g.M_);
    IwasawaSeries out(p_, N, M);
    out.c_ = vec_mul(c_, g.c_, p_power(p_, N), M);
    return out;
}

IwasawaSeries IwasawaSeries::scalar_mul(const PAdicInt& c) const {
    if (c.prime() != p_) throw PrecisionMismatch("scalar has a different prime");
    const int N = std::min(N_, c.precision());
    const mpz_class pN = p_power(p_, N);
    IwasawaSeries out(p_, N, M_);
    for (int i = 0; i < M_; ++i) {
        mpz_class v = c_[static_cast<size_t>(i)] * c.residue();
        mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), pN.get_mpz_t());
        out.c_[static_cast<size_t>(i)] = v;
    }
    return out;
}

bool IwasawaSeries::congruent_to(const IwasawaSeries& g) const {
    require_compatible(g);
    const int N = std::min(N_, g.N_);
    const int M = std::min(M_, g.M_);
    const mpz_class pN = p_power(p_, N);
    for (int i = 0; i < M; ++i) {
        mpz_class d = c_[static_cast<size_t>(i)] - g.c_[static_cast<size_t>(i)];
        if (!mpz_divisible_p(d.get_mpz_t(), pN.get_mpz_t())) return false;
    }
    return true;
}

PAdicInt IwasawaSeries::specialize(int k) const {
    return specialize(k, default_one_unit(p_, N_));
}

PAdicInt IwasawaSeries::specialize(int k, const PAdicInt& u) const {
    if (k < 2) throw RangeError("specialization weight must be >= 2");
    if (u.prime() != p_) throw PrecisionMismatch("u has a different prime");
    const int N = std::min(N_, u.precision());
    if (N >= 2) {
        const mpz_class p2 = p_power(p_, 2);
        mpz_class d = u.residue() - 1 - p_;
        if (!mpz_divisible_p(d.get_mpz_t(), p2.get_mpz_t())) {
            throw std::invalid_argument("u must satisfy u = 1 + p (mod p^2)");
        }
    }
    const mpz_class pN = p_power(p_, N);
    mpz_class t;
    mpz_class e = k - 2;
    mpz_powm(t.get_mpz_t(), u.residue().get_mpz_t(), e.get_mpz_t(), pN.get_mpz_t());
    t -= 1;
    mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), pN.get_mpz_t());
    const mpz_class val = poly_eval_mod(c_, t, pN);
    const int Nout = std::min(N, M_);
    return PAdicInt(p_, Nout, val);
}

WeierstrassFactorization weierstrass(const IwasawaSeries& f) {
    if (f.is_zero()) {
        throw IndistinguishableFromZero(
            "series is 0 mod (p^N, T^M); no Weierstrass data is recoverable");
    }
    const long p = f.prime();
    const int N = f.precision_p();
    const int M = f.truncation();

    const int mu = f.min_valuation();
    int lambda = -1;
    for (int i = 0; i < M; ++i) {
        if (residue_val(f.coefficients()[static_cast<size_t>(i)], p, N) == mu) {
            lambda = i;
            break;
        }
    }
    assert(lambda >= 0);
    if (lambda >= M) throw TruncationTooShort("lambda is not below T^M");

    const IwasawaSeries g = f.shifted_down_p(mu);
    const int Nw = N - mu;
    const mpz_class pNw = p_power(p, Nw);

    Vec h(static_cast<size_t>(M), mpz_class(0));
    h[static_cast<size_t>(lambda)] = 1;
    Vec q, r;
    wdivide(h, g.coefficients(), lambda, p, Nw, pNw, M, q, r);

    // D = T^lambda - r; the remainder is divisible by p because mod p the
    // shifted series is T^lambda times a unit, so D is distinguished.
    Vec D(static_cast<size_t>(lambda) + 1, mpz_class(0));
    D[static_cast<size_t>(lambda)] = 1;
    for (int i = 0; i < lambda; ++i) {
        mpz_class v = -r[static_cast<size_t>(i)];
        mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), pNw.get_mpz_t());
        assert(residue_val(v, p, Nw) >= 1);
        D[static_cast<size_t>(i)] = v;
    }

    WeierstrassFactorization out;
    out.mu = mu;
    out.lambda = lambda;
    out.distinguished = std::move(D);
    out.unit = IwasawaSeries(p, Nw, M, series_inv(q, pNw, M));
    out.guaranteed_N = N;
    out.p = p;
    out.part_N = Nw;
    return out;
}

HeightOnePrimeFactor HeightOnePrimeFactor::prime_p(long p) {
    HeightOnePrimeFactor f;
    f.kind = PrimeKind::PrimeP;
    f.p = p;
    f.N = 0;
    f.irreducibility = Irreducibility::Certified;
    f.certificate = CertificateTag::None;
    return f;
}

HeightOnePrimeFactor HeightOnePrimeFactor::distinguished(
    long p, int N, std::vector<mpz_class> poly, Irreducibility irr,
    CertificateTag cert) {
    HeightOnePrimeFactor f;
    f.kind = PrimeKind::Distinguished;
    f.p = p;
    f.N = N;
    f.poly = std::move(poly);
    f.irreducibility = irr;
    f.certificate = cert;
    return f;
}

OrdResult ord_at(const IwasawaSeries& f, const HeightOnePrimeFactor& P) {
    if (f.is_zero()) {
        throw IndistinguishableFromZero("order of the zero series is undefined");
    }
    if (P.kind == PrimeKind::PrimeP) {
        if (P.p != f.prime()) throw PrecisionMismatch("prime mismatch");
        return {f.min_valuation(), false};
    }

    const long p = f.prime();
    if (P.p != p) throw PrecisionMismatch("prime mismatch");
    const int Nw = std::min(f.precision_p(), P.N);
    const mpz_class pNw = p_power(p, Nw);

    Vec D = P.poly;
    while (!D.empty() && D.back() % pNw == 0) D.pop_back();
    const int d = static_cast<int>(D.size()) - 1;
    if (d < 1) throw std::invalid_argument("divisor must have degree >= 1");
    D = reduce_vec(std::move(D), pNw, d + 1);
    if (D.back() != 1) throw std::invalid_argument("divisor must be monic");
    for (int i = 0; i < d; ++i) {
        if (residue_val(D[static_cast<size_t>(i)], p, Nw) < 1) {
            throw std::invalid_argument("divisor must be distinguished");
        }
    }

    // Noise allowance for the remainder-vanishing test: dividing f by P
    // repeatedly can smear at most mu + lambda digits of the input.
    const int mu = f.min_valuation();
    int lambda = 0;
    for (int i = 0; i < f.truncation(); ++i) {
        if (residue_val(f.coefficients()[static_cast<size_t>(i)], p,
                        f.precision_p()) == mu) {
            lambda = i;
            break;
        }
    }
    const int slack = mu + lambda;
    const int threshold = Nw - slack;

    Vec cur = reduce_vec(f.coefficients(), pNw, f.truncation());
    int curM = f.truncation();
    int count = 0;
    while (true) {
        if (vec_is_zero(cur)) return {count, true};
        if (d > curM - 1) return {count, true};
        Vec g = reduce_vec(D, pNw, curM);
        Vec q, r;
        wdivide(cur, g, d, p, Nw, pNw, curM, q, r);
        int rmin = Nw;
        for (const auto& c : r) rmin = std::min(rmin, residue_val(c, p, Nw));
        if (rmin < threshold) return {count, false};
        ++count;
        curM -= d;
        if (curM < 1) return {count, true};
        q.resize(static_cast<size_t>(curM));
        cur = std::move(q);
    }
}

DistinguishedFactorization factor_distinguished(const std::vector<mpz_class>& Din,
                                                long p, int N, int lambda_max) {
    check_pN(p, N);
    const mpz_class pN = p_power(p, N);
    Vec R = Din;
    while (!R.empty() && R.back() % pN == 0) R.pop_back();
    if (R.empty()) throw std::invalid_argument("zero polynomial");
    int deg = static_cast<int>(R.size()) - 1;
    R = reduce_vec(std::move(R), pN, deg + 1);
    if (R.back() != 1) throw std::invalid_argument("polynomial must be monic");
    for (int i = 0; i < deg; ++i) {
        if (residue_val(R[static_cast<size_t>(i)], p, N) < 1) {
            throw std::invalid_argument("polynomial must be distinguished");
        }
    }
    if (deg > lambda_max) {
        throw RangeError("degree exceeds lambda_max");
    }

    DistinguishedFactorization out;
    out.guaranteed_N = N;

    // Per-coefficient lower bounds on the valuation of (stored - true).
    // Deflating by an approximate root degrades the quotient, which in turn
    // caps how far the next stage's root can be trusted; N means "exact at
    // working precision".
    std::vector<int> errs(R.size(), N);

    auto push_factor = [&out](HeightOnePrimeFactor prime, int mult) {
        for (auto& f : out.factors) {
            if (f.prime.kind == prime.kind && f.prime.poly == prime.poly) {
                f.multiplicity += mult;
                return;
            }
        }
        out.factors.push_back({std::move(prime), mult});
    };

    while (poly_degree(R) >= 2) {
        deg = poly_degree(R);
        std::vector<long> vals;
        for (int i = 0; i <= deg; ++i) {
            vals.push_back(residue_val(R[static_cast<size_t>(i)], p, N));
        }
        const auto hull = newton_hull(vals);
        std::vector<long> slopes;
        for (size_t s = 0; s + 1 < hull.size(); ++s) {
            const long run = hull[s + 1].first - hull[s].first;
            const long drop = hull[s].second - hull[s + 1].second;
            if (drop > 0 && drop % run == 0) slopes.push_back(drop / run);
        }
        std::sort(slopes.begin(), slopes.end());
        slopes.erase(std::unique(slopes.begin(), slopes.end()), slopes.end());

        bool found = false;
        for (const long s : slopes) {
            // E(y) = R(p^s y) / p^m with m chosen to make E primitive.
            long m = vals[0];
            for (int i = 1; i <= deg; ++i) m = std::min(m, vals[static_cast<size_t>(i)] + s * i);
            const int NE = N - static_cast<int>(m);
            if (NE < 1) continue;
            // E inherits the quotient's coefficient errors scaled by p^{si-m};
            // a root of the stored E tracks the true root only that far.
            int eprec = NE;
            for (int i = 0; i <= deg; ++i) {
                const long ei = errs[static_cast<size_t>(i)] + s * i - m;
                eprec = std::min(eprec, static_cast<int>(ei));
            }
            if (eprec < 1) continue;
            const mpz_class pNE = p_power(p, NE);
            Vec E(static_cast<size_t>(deg) + 1, mpz_class(0));
            for (int i = 0; i <= deg; ++i) {
                mpz_class c = R[static_cast<size_t>(i)] * p_power(p, static_cast<int>(s) * i);
                mpz_class pm = p_power(p, static_cast<int>(m));
                mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), pm.get_mpz_t());
                mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), pNE.get_mpz_t());
                E[static_cast<size_t>(i)] = c;
            }
            Vec dE;
            for (size_t i = 1; i < E.size(); ++i) dE.push_back(static_cast<long>(i) * E[i]);

            for (long y0 = 1; y0 < p && !found; ++y0) {
                const mpz_class ev = poly_eval_mod(E, y0, mpz_class(p));
                if (ev != 0) continue;
                const mpz_class dv = poly_eval_mod(dE, y0, mpz_class(p));
                if (dv == 0) continue; // not a simple root: leave for certification
                const mpz_class ystar = hensel_root(E, p, NE, y0);
                mpz_class x = ystar * p_power(p, static_cast<int>(s));
                mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), pN.get_mpz_t());
                const int rootN = std::min(N, eprec + static_cast<int>(s));
                const int vx = residue_val(x, p, N);

                int mult = 0;
                while (poly_degree(R) >= 1) {
                    Vec Q;
                    const mpz_class rem = synthetic_divide(R, x, pN, Q);
                    if (residue_val(rem, p, N) < rootN) break;
                    // First-order error propagation through the deflation
                    // q_i = r_{i+1} + x*q_{i+1}.
                    std::vector<int> nerrs(Q.size(), N);
                    for (int i = static_cast<int>(Q.size()) - 2; i >= 0; --i) {
                        const int carry_x = vx + nerrs[static_cast<size_t>(i) + 1];
                        const int carry_q =
                            rootN + residue_val(Q[static_cast<size_t>(i) + 1], p, N);
                        nerrs[static_cast<size_t>(i)] = std::min(
                            {errs[static_cast<size_t>(i) + 1], carry_x, carry_q, N});
                    }
                    R = std::move(Q);
                    errs = std::move(nerrs);
                    ++mult;
                }
                if (mult > 0) {
                    out.guaranteed_N = std::min(out.guaranteed_N, rootN);
                    mpz_class c0 = -x;
                    mpz_fdiv_r(c0.get_mpz_t(), c0.get_mpz_t(), pN.get_mpz_t());
                    push_factor(HeightOnePrimeFactor::distinguished(
                                    p, N, {c0, mpz_class(1)},
                                    Irreducibility::Certified,
                                    CertificateTag::Degree1),
                                mult);
                    found = true;
                }
            }
            if (found) break;
        }

        if (!found) {
            // No simple root in pZ_p: certify the residual if its shape allows.
            deg = poly_degree(R);
            const int c0v = residue_val(R[0], p, N);
            Irreducibility irr = Irreducibility::Unresolved;
            CertificateTag cert = CertificateTag::None;
            if (c0v == 1) {
                irr = Irreducibility::Certified;
                cert = CertificateTag::Eisenstein;
            } else if (c0v < N) {
                std::vector<long> rvals;
                for (int i = 0; i <= deg; ++i) {
                    rvals.push_back(residue_val(R[static_cast<size_t>(i)], p, N));
                }
                const auto rhull = newton_hull(rvals);
                if (rhull.size() == 2 &&
                    std::gcd(static_cast<long>(c0v), static_cast<long>(deg)) == 1) {
                    irr = Irreducibility::Certified;
                    cert = CertificateTag::NewtonSingleSlope;
                }
            }
            R.resize(static_cast<size_t>(deg) + 1);
            for (int i = 0; i <= deg; ++i) {
                out.guaranteed_N =
                    std::min(out.guaranteed_N, errs[static_cast<size_t>(i)]);
            }
            push_factor(HeightOnePrimeFactor::distinguished(p, N, R, irr, cert), 1);
            return out;
        }
    }

    if (poly_degree(R) == 1) {
        out.guaranteed_N = std::min({out.guaranteed_N, errs[0], errs[1]});
        push_factor(HeightOnePrimeFactor::distinguished(
                        p, N, {R[0], mpz_class(1)}, Irreducibility::Certified,
                        CertificateTag::Degree1),
                    1);
    }
    return out;
}

} // namespace ilat
