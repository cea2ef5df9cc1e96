#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ilat/padic.hpp"

namespace ilat {

/**
 * @brief 2x2 matrix over Z_p at a shared precision p^N.
 *
 * Row-major entries [[a, b], [c, d]].  All four entries must share (p, N);
 * mixed-precision arithmetic truncates entrywise exactly like PAdicInt.
 */
struct Mat2 {
    PAdicInt a, b, c, d;

    static Mat2 identity(long p, int N);
    static Mat2 from_integers(long p, int N, const mpz_class& a, const mpz_class& b,
                              const mpz_class& c, const mpz_class& d);

    long prime() const { return a.prime(); }
    int precision() const;  ///< min of the entry precisions

    Mat2 operator*(const Mat2& o) const;
    Mat2 operator+(const Mat2& o) const;
    Mat2 operator-(const Mat2& o) const;

    PAdicInt det() const;
    PAdicInt trace() const;

    /// Adjugate [[d, -b], [-c, a]]; satisfies M * adj(M) = det(M) * I.
    Mat2 adjugate() const;

    /// Inverse adj(M) / det(M); throws NotAUnit when det(M) is not a unit.
    Mat2 inverse() const;

    /// Entrywise congruence mod p^min(N) (shapes must share the prime).
    bool congruent_to(const Mat2& o) const;
};

/// One group generator: a display label and its image under the representation.
struct Generator {
    std::string label;
    Mat2 matrix;
};

/**
 * @brief A 2-dimensional representation over Z_p given by finitely many
 * generator images, known modulo p^N.
 *
 * Every generator must be invertible over Z_p (unit determinant), and the
 * distinguished generator `generators[g0_index]` must have a characteristic
 * polynomial with two roots in F_p that are distinct mod p, so both lift to
 * Z_p by Hensel's lemma.  Operations that need those properties validate
 * them and throw NotAUnit / EigenvaluesNotDistinctModP / EigenvaluesNotRational.
 */
struct MatrixRep {
    long p = 0;
    int N = 0;
    std::vector<Generator> generators;
    std::size_t g0_index = 0;
};

/**
 * @brief Result of diagonalizing the distinguished generator.
 *
 * `basis` has unit determinant and its columns are eigenvectors of the
 * distinguished generator; `rep` holds every generator conjugated by
 * basis^{-1} (so rep.generators[g0_index].matrix is diag(lambda1, lambda2)
 * exactly at precision N).  Eigenvalues are ordered deterministically by
 * their residue mod p: lambda1 is the smaller one.
 */
struct Diagonalization {
    Mat2 basis;
    MatrixRep rep;
    PAdicInt lambda1, lambda2;
};

/// @brief Hensel-diagonalize the distinguished generator and conjugate the
/// whole representation into its eigenbasis.
Diagonalization diagonalize_g0(const MatrixRep& rep);

/// Whether the word search provably closed up before the length bound.
enum class Saturation {
    Stable,   ///< last length increment produced no new valuation decrease
    BoundHit, ///< the bound cut the search while minima were still moving
};

/**
 * @brief Order of the (principal) reducibility ideal of a representation
 * whose distinguished generator has residually distinct rational eigenvalues.
 *
 * In the eigenbasis of the distinguished generator write
 * rho(w) = [[a(w), b(w)], [c(w), d(w)]].  The ideal generated by all products
 * b(w) c(w') is p^ord with ord = min_w val b(w) + min_w val c(w).
 *
 * `witness` is the pair of word labels (one for the b minimum, one for the c
 * minimum) realizing ord, with lexicographically smallest labels on ties, so
 * reruns are reproducible.  `min_val_b` + `min_val_c` == `ord`.
 */
struct ReducibilityResult {
    int ord = 0;
    std::pair<std::string, std::string> witness;
    Saturation saturation = Saturation::Stable;
    int min_val_b = 0;
    int min_val_c = 0;
    long examined_words = 0;  ///< distinct matrices seen by the search
};

/**
 * @brief Compute the reducibility ideal by breadth-first enumeration of
 * semigroup words in the generators up to length `word_bound`.
 *
 * Duplicate word matrices (equal at precision) are pruned.  Word labels are
 * generator labels joined by '*' in product order.
 *
 * Throws InfiniteWithinPrecision when every examined product b(w) c(w') has
 * residue 0 mod p^N, i.e. the ideal is indistinguishable from zero at this
 * precision (in particular for genuinely triangular representations).
 */
ReducibilityResult reducibility_ideal(const MatrixRep& rep, int word_bound = 6);

/**
 * @brief The two residual characters mod p^n cut out by the reducibility
 * ideal: theta1(g) = a(g), theta2(g) = d(g) in the eigenbasis, per generator
 * label.
 *
 * Both maps are multiplicative mod p^n on all words because every product
 * b(w) c(w') has valuation >= ord >= n.  Requires 1 <= n <= ord with a
 * Stable search (a BoundHit ord is only an upper bound, so it certifies
 * nothing); violations throw OrdTooSmall.
 */
struct ResidualCharacters {
    int n = 0;
    std::map<std::string, PAdicInt> theta1, theta2;
};

ResidualCharacters residual_characters(const MatrixRep& rep, int n, int word_bound = 6);

/**
 * @brief Maximal chain of stable lattices T_n > T_{n-1} > ... > T_0 for a
 * representation with reducibility order n.
 *
 * `bases[j]` spans T_j (columns, original coordinates); consecutive
 * quotients have order p, T_j / T_0 = Z/p^j, and the group acts on
 * T_n / T_0 through the first residual character (`quotient_type`).
 * Every spanned lattice is stable under the whole representation.
 */
struct LatticeChain {
    std::vector<Mat2> bases;
    std::string quotient_type = "theta_1";
};

LatticeChain lattice_chain(const MatrixRep& rep, int word_bound = 6);

/// Number of isomorphism classes of stable lattices: reducibility order + 1.
long count_classes(const MatrixRep& rep, int word_bound = 6);

/// @brief True when basis^{-1} rho(g) basis is integral for every generator,
/// i.e. the column span of `basis` is a stable lattice.  The determinant of
/// `basis` must have valuation < N (throws InsufficientPrecision otherwise).
bool preserves_lattice(const MatrixRep& rep, const Mat2& basis);

} // namespace ilat
