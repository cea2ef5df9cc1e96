#include "ilat/reducibility.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "ilat/errors.hpp"

namespace ilat {

namespace {

/// Shape/unit validation shared by every operation on a MatrixRep.
void validate(const MatrixRep& rep) {
    check_pN(rep.p, rep.N);
    if (rep.generators.empty())
        throw RangeError("representation needs at least one generator");
    if (rep.g0_index >= rep.generators.size())
        throw RangeError("g0_index is out of range");
    for (const auto& g : rep.generators) {
        for (const PAdicInt* e : {&g.matrix.a, &g.matrix.b, &g.matrix.c, &g.matrix.d})
            if (e->prime() != rep.p || e->precision() != rep.N)
                throw PrecisionMismatch("generator '" + g.label +
                                        "' does not match the representation's (p, N)");
        if (!g.matrix.det().is_unit())
            throw NotAUnit("generator '" + g.label + "' is not invertible over Z_p");
    }
}

/// Dedup key: the four canonical residues, uniquely delimited.
std::string key_of(const Mat2& m) {
    return m.a.residue().get_str(36) + "|" + m.b.residue().get_str(36) + "|" +
           m.c.residue().get_str(36) + "|" + m.d.residue().get_str(36);
}

/// Everything the downstream operations need from one word search.
struct Analysis {
    Diagonalization diag;
    int min_b = 0, min_c = 0;  ///< minimal valuations of b(w), c(w); N when all vanish
    std::string wit_b, wit_c;  ///< lexicographically smallest words attaining them
    Saturation saturation = Saturation::Stable;
    long examined = 0;
};

Analysis analyze(const MatrixRep& rep, int word_bound) {
    if (word_bound < 1) throw RangeError("word_bound must be >= 1");
    Analysis out{diagonalize_g0(rep)};
    const int N = rep.N;
    out.min_b = N + 1;
    out.min_c = N + 1;

    auto consider = [&](const std::string& label, const Mat2& m) {
        const int vb = m.b.valuation().value;  // == N exactly when the residue is 0
        if (vb < out.min_b || (vb == out.min_b && label < out.wit_b)) {
            out.min_b = vb;
            out.wit_b = label;
        }
        const int vc = m.c.valuation().value;
        if (vc < out.min_c || (vc == out.min_c && label < out.wit_c)) {
            out.min_c = vc;
            out.wit_c = label;
        }
    };

    struct Word {
        std::string label;
        Mat2 m;
    };
    const auto& gens = out.diag.rep.generators;
    std::set<std::string> seen;
    std::vector<Word> frontier;
    for (const auto& g : gens)
        if (seen.insert(key_of(g.matrix)).second) {
            consider(g.label, g.matrix);
            frontier.push_back({g.label, g.matrix});
            ++out.examined;
        }

    bool ran_increment = false;
    bool last_decreased = false;
    for (int len = 2; len <= word_bound && !frontier.empty(); ++len) {
        ran_increment = true;
        const int before_b = out.min_b, before_c = out.min_c;
        std::vector<Word> next;
        for (const auto& w : frontier)
            for (const auto& g : gens) {
                Mat2 m = w.m * g.matrix;
                if (seen.insert(key_of(m)).second) {
                    std::string label = w.label + "*" + g.label;
                    consider(label, m);
                    next.push_back({std::move(label), std::move(m)});
                    ++out.examined;
                }
            }
        last_decreased = out.min_b < before_b || out.min_c < before_c;
        frontier = std::move(next);
    }
    const bool closed = frontier.empty();  // the semigroup closed up at precision
    out.saturation = (closed || (ran_increment && !last_decreased)) ? Saturation::Stable
                                                                    : Saturation::BoundHit;
    return out;
}

[[noreturn]] void throw_infinite(const Analysis& a, int N) {
    throw InfiniteWithinPrecision(
        "every product b(w)c(w') vanishes mod p^" + std::to_string(N) +
        " (minimal valuations " + std::to_string(a.min_b) + " + " + std::to_string(a.min_c) +
        "); the stable-lattice family is not finite at this precision");
}

void require_stable(const Analysis& a) {
    if (a.saturation != Saturation::Stable)
        throw OrdTooSmall(
            "the word search hit its length bound while valuations were still "
            "decreasing, so the computed order is only an upper bound");
}

}  // namespace

Mat2 Mat2::identity(long p, int N) {
    return {PAdicInt::one(p, N), PAdicInt::zero(p, N), PAdicInt::zero(p, N),
            PAdicInt::one(p, N)};
}

Mat2 Mat2::from_integers(long p, int N, const mpz_class& a, const mpz_class& b,
                         const mpz_class& c, const mpz_class& d) {
    return {PAdicInt(p, N, a), PAdicInt(p, N, b), PAdicInt(p, N, c), PAdicInt(p, N, d)};
}

int Mat2::precision() const {
    return std::min(std::min(a.precision(), b.precision()),
                    std::min(c.precision(), d.precision()));
}

Mat2 Mat2::operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

Mat2 Mat2::operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }

Mat2 Mat2::operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }

PAdicInt Mat2::det() const { return a * d - b * c; }

PAdicInt Mat2::trace() const { return a + d; }

Mat2 Mat2::adjugate() const { return {d, -b, -c, a}; }

Mat2 Mat2::inverse() const {
    const PAdicInt di = det().inverse();
    const Mat2 adj = adjugate();
    return {adj.a * di, adj.b * di, adj.c * di, adj.d * di};
}

bool Mat2::congruent_to(const Mat2& o) const {
    return a.congruent_to(o.a) && b.congruent_to(o.b) && c.congruent_to(o.c) &&
           d.congruent_to(o.d);
}

Diagonalization diagonalize_g0(const MatrixRep& rep) {
    validate(rep);
    const long p = rep.p;
    const int N = rep.N;
    const Mat2& g0 = rep.generators[rep.g0_index].matrix;
    const PAdicInt t = g0.trace();
    const PAdicInt s = g0.det();

    // Residual analysis of the characteristic polynomial X^2 - t X + s.
    const mpz_class pz(p);
    const mpz_class tr = t.residue() % pz;
    const mpz_class sr = s.residue() % pz;
    mpz_class disc = (tr * tr - 4 * sr) % pz;
    if (disc < 0) disc += pz;
    if (disc == 0)
        throw EigenvaluesNotDistinctModP(
            "the distinguished generator has a repeated eigenvalue mod p");
    mpz_class euler;
    const mpz_class half = (pz - 1) / 2;
    mpz_powm(euler.get_mpz_t(), disc.get_mpz_t(), half.get_mpz_t(), pz.get_mpz_t());
    if (euler != 1)
        throw EigenvaluesNotRational(
            "the distinguished generator's eigenvalues are not in Z_p "
            "(the characteristic polynomial is irreducible mod p)");

    Mat2 basis;
    PAdicInt l1, l2;
    if (g0.b.is_zero() && g0.c.is_zero()) {
        // Already diagonal: keep the coordinates, at most swapping them so the
        // smaller-residue eigenvalue comes first.
        const bool keep = (g0.a.residue() % pz) < (g0.d.residue() % pz);
        l1 = keep ? g0.a : g0.d;
        l2 = keep ? g0.d : g0.a;
        basis = keep ? Mat2::identity(p, N)
                     : Mat2{PAdicInt::zero(p, N), PAdicInt::one(p, N),
                            PAdicInt::one(p, N), PAdicInt::zero(p, N)};
    } else {
        long r1 = -1;
        for (long r = 0; r < p && r1 < 0; ++r) {
            mpz_class fr = (mpz_class(r) * r - tr * r + sr) % pz;
            if (fr < 0) fr += pz;
            if (fr == 0) r1 = r;
        }
        if (r1 < 0)
            throw EigenvaluesNotRational("no eigenvalue found mod p");  // unreachable

        // Hensel-lift the residual root; its sibling is t - lambda exactly.
        PAdicInt x(p, N, r1);
        for (int it = 0; it < 64; ++it) {
            const PAdicInt fx = x * x - t * x + s;
            if (fx.is_zero()) break;
            x = x - fx * (x + x - t).inverse();
        }
        if (!(x * x - t * x + s).is_zero())
            throw std::logic_error("eigenvalue lift failed to converge");
        l1 = x;
        l2 = t - x;
        if ((l2.residue() % pz) < (l1.residue() % pz)) std::swap(l1, l2);

        // Exact eigenvector for an exact eigenvalue: (b, l-a), or (l-d, c) when
        // the first is imprimitive.  Both fail only for a residually scalar
        // matrix, which the distinct-eigenvalue check already excluded.
        auto eigvec = [&](const PAdicInt& l) {
            PAdicInt vx = g0.b, vy = l - g0.a;
            if (!vx.is_unit() && !vy.is_unit()) {
                vx = l - g0.d;
                vy = g0.c;
            }
            return std::pair<PAdicInt, PAdicInt>(vx, vy);
        };
        const auto [x1, y1] = eigvec(l1);
        const auto [x2, y2] = eigvec(l2);
        basis = Mat2{x1, x2, y1, y2};
    }
    if (!basis.det().is_unit())
        throw std::logic_error("eigenbasis is not unimodular");

    Diagonalization out{basis, rep, l1, l2};
    const Mat2 inv = basis.inverse();
    for (auto& g : out.rep.generators) g.matrix = inv * g.matrix * basis;
    const Mat2& d0 = out.rep.generators[rep.g0_index].matrix;
    if (!d0.b.is_zero() || !d0.c.is_zero())
        throw std::logic_error("conjugated distinguished generator is not diagonal");
    return out;
}

ReducibilityResult reducibility_ideal(const MatrixRep& rep, int word_bound) {
    const Analysis a = analyze(rep, word_bound);
    if (a.min_b + a.min_c >= rep.N) throw_infinite(a, rep.N);
    ReducibilityResult r;
    r.ord = a.min_b + a.min_c;
    r.witness = {a.wit_b, a.wit_c};
    r.saturation = a.saturation;
    r.min_val_b = a.min_b;
    r.min_val_c = a.min_c;
    r.examined_words = a.examined;
    return r;
}

ResidualCharacters residual_characters(const MatrixRep& rep, int n, int word_bound) {
    if (n < 1) throw RangeError("character precision n must be >= 1");
    const Analysis a = analyze(rep, word_bound);
    if (a.min_b + a.min_c >= rep.N) throw_infinite(a, rep.N);
    require_stable(a);
    const int ord = a.min_b + a.min_c;
    if (n > ord)
        throw OrdTooSmall("characters are only well defined mod p^ord with ord = " +
                          std::to_string(ord) + ", got n = " + std::to_string(n));
    ResidualCharacters out;
    out.n = n;
    for (const auto& g : a.diag.rep.generators) {
        out.theta1.emplace(g.label, g.matrix.a.truncated(n));
        out.theta2.emplace(g.label, g.matrix.d.truncated(n));
    }
    return out;
}

LatticeChain lattice_chain(const MatrixRep& rep, int word_bound) {
    const Analysis a = analyze(rep, word_bound);
    if (a.min_b + a.min_c >= rep.N) throw_infinite(a, rep.N);
    require_stable(a);
    const int n = a.min_b + a.min_c;

    // Orient the eigenbasis by scaling the second eigenvector by p^min_c; in
    // the oriented coordinates every c(w) is integral after division by
    // p^min_c while every b(w) gains that much, so the sublattices spanned by
    // (p^{n-j} w1, w2) for j = 0..n are all stable, each of index p in the
    // next, and the group acts on T_n / T_0 through theta_1.
    const Mat2& S = a.diag.basis;
    LatticeChain chain;
    for (int j = 0; j <= n; ++j)
        chain.bases.push_back({S.a.shifted_up(n - j), S.b.shifted_up(a.min_c),
                               S.c.shifted_up(n - j), S.d.shifted_up(a.min_c)});
    return chain;
}

long count_classes(const MatrixRep& rep, int word_bound) {
    const Analysis a = analyze(rep, word_bound);
    if (a.min_b + a.min_c >= rep.N) throw_infinite(a, rep.N);
    require_stable(a);
    return static_cast<long>(a.min_b) + a.min_c + 1;
}

bool preserves_lattice(const MatrixRep& rep, const Mat2& basis) {
    validate(rep);
    if (basis.prime() != rep.p)
        throw PrecisionMismatch("basis prime differs from the representation's");
    const Valuation dv = basis.det().valuation();
    if (dv.is_lower_bound)
        throw InsufficientPrecision(
            "basis determinant is indistinguishable from zero at this precision");
    const Mat2 adj = basis.adjugate();
    for (const auto& g : rep.generators) {
        const Mat2 m = adj * g.matrix * basis;
        for (const PAdicInt* e : {&m.a, &m.b, &m.c, &m.d})
            if (e->valuation().value < dv.value) return false;
    }
    return true;
}

} // namespace ilat
