#pragma once

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "ilat/padic.hpp"

namespace ilat {

/**
 * @brief Reduced fraction with positive denominator.
 *
 * GMP's mpq_class keeps every value canonical (gcd(|num|, den) = 1,
 * den > 0), which is exactly the invariant wanted here.
 */
using ExactRational = mpq_class;

/**
 * @brief A power chi = omega^j of the Teichmüller character at an odd
 * prime p.
 *
 * omega maps units mod p to the (p-1)-st roots of unity in Z_p, so the
 * powers omega^j (0 <= j < p-1) are the characters of conductor dividing
 * p.  chi is even or odd according to j: chi(-1) = (-1)^j.
 */
struct OmegaPowerCharacter {
    long p; ///< odd prime
    long j; ///< exponent, normalized into [0, p-2]

    /// Normalizes any integer exponent into [0, p-2]; validates p.
    OmegaPowerCharacter(long p, long j_raw);

    bool trivial() const noexcept { return j == 0; }
    bool is_even() const noexcept { return j % 2 == 0; }

    /// chi(a) = teichmuller(a)^j mod p^N, and 0 when p | a.
    PAdicInt operator()(const mpz_class& a, int N) const;
};

/**
 * @brief The k-th Bernoulli number, convention B_1 = -1/2
 * (generating function t/(e^t - 1)), by the defining recurrence
 * sum_{j=0..n} C(n+1, j) B_j = [n = 0] over exact rationals.
 */
ExactRational bernoulli(long k);

/**
 * @brief Whether p divides the numerator of B_k (k even, k >= 2).
 *
 * In the classical range 2 <= k <= p-3 this is the irregular-pair
 * predicate, decided by the power-sum congruence
 * sum_{a=1..p-1} a^k = p * B_k (mod p^2).  Outside that range the
 * numerator question is still well-defined and is answered via
 * von Staudt-Clausen ((p-1) | k forces a unit numerator), Adams'
 * theorem (p | k forces p | numerator when (p-1) does not divide k),
 * and the Kummer congruence to reduce into the classical range.
 *
 * @throws RangeError for k < 2 or k odd.
 */
bool is_irregular_pair(long p, long k);

/**
 * @brief All irregular pairs (p, k), 2 <= k <= p-3, for primes p <= p_max,
 * in ascending lexicographic order.
 *
 * Per prime the Bernoulli residues B_2..B_{p-3} mod p come from the
 * mod-p recurrence (a different algorithm than is_irregular_pair uses,
 * so the two can check each other).  Primes are processed in parallel;
 * results are merged in prime order, so the output is deterministic.
 */
std::vector<std::pair<long, long>> scan_irregular_pairs(long p_max);

/**
 * @brief Generalized Bernoulli number B_{n,chi} as an element of Z_p.
 *
 * For trivial chi the conductor is taken to be 1, so the value is
 * B_n(1) = B_n for n != 1 and +1/2 for n = 1.  For nontrivial chi,
 * B_{n,chi} = p^{n-1} sum_{a=1..p} chi(a) B_n(a/p), computed exactly at
 * working precision N+1 and divided by p at the end; if the character
 * sum shows the true value is not p-integral (exactly the slot
 * chi = omega^{-n}, e.g. B_{2,omega^2} = 4/5 at p = 5),
 * DenominatorNotUnit is thrown rather than returning a
 * wrong residue.  Parity: the value is exactly 0 when
 * chi(-1) != (-1)^n, except the classical B_{1,1} = +1/2.
 *
 * @throws DenominatorNotUnit when the exact value has p in its
 *         denominator; RangeError for n < 1.
 */
PAdicInt generalized_bernoulli(long n, const OmegaPowerCharacter& chi, int N);

/**
 * @brief p * B_{n,chi}, which is p-integral for every n and chi (the value
 * B_{n,chi} itself has at worst a single p in its denominator).
 *
 * Useful where the non-integral slot chi = omega^{-n} must be handled
 * without losing the value, e.g. assembling (u^k - 1) L_p(1-k, omega^0)
 * with the pole cleared.
 *
 * @throws RangeError for n < 1.
 */
PAdicInt generalized_bernoulli_times_p(long n, const OmegaPowerCharacter& chi,
                                       int N);

/**
 * @brief The classical special value L_p(1-n, omega^m) via
 * -(1 - theta*omega^{-n}(p) * p^{n-1}) * B_{n, theta*omega^{-n}} / n
 * with theta = omega^m.
 *
 * The Euler-factor character value theta*omega^{-n}(p) is 1 exactly
 * when m = n mod (p-1) (the twist is then trivial of conductor 1) and
 * 0 otherwise.  Division by n is exact: the computation runs at
 * working precision N + val_p(n), so the result carries the full
 * requested precision N.
 *
 * @throws DenominatorNotUnit when the underlying generalized Bernoulli
 *         value (or the division by n) leaves p in a denominator, which
 *         happens only in the excluded pole family m = 0 with
 *         (p-1) | n; RangeError for n < 1.
 */
PAdicInt lp_value(long p, long m, long n, int N);

} // namespace ilat
