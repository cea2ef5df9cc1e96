#pragma once

#include <gmpxx.h>

#include <vector>

namespace ilat {

/// The weight-12 congruence prime: numerator prime of B_12 / 12.
inline constexpr long weight12_congruence_prime = 691;

/**
 * @brief Exact q-expansion coefficients of the discriminant cusp form
 * Delta = q * prod_{n>=1} (1 - q^n)^24 = sum tau(n) q^n.
 *
 * Coefficients are exact integers; tau[i] stores tau(i+1).
 */
struct QExpansion {
    long n_max = 0;
    std::vector<mpz_class> tau;

    /// tau(n) for 1 <= n <= n_max; throws OutOfRange otherwise.
    const mpz_class& at(long n) const;
};

/**
 * @brief Expand q * prod (1 - q^n)^24 to q^{n_max} with exact integer
 * arithmetic: the sparse pentagonal-number series for prod (1 - q^n) raised
 * to the 24th power by square-and-multiply on truncated polynomials.
 */
QExpansion tau_coefficients(long n_max);

/**
 * @brief Whether tau(l) == 1 + l^11 mod 691, the Eisenstein congruence that
 * makes the residual representation at 691 reducible.
 *
 * Requires a prime l <= n_max (OutOfRange otherwise); l = 691 itself is
 * allowed, where the right side collapses to 1.
 */
bool eisenstein_congruence(long l, const QExpansion& exp);

/**
 * @brief 691-adic valuation of tau(l) - 1 - l^11, the weight-12
 * specialization of the Eisenstein-ideal generator attached to a prime
 * l != 691.  At least 1 whenever the Eisenstein congruence holds.
 *
 * Requires a prime l <= n_max with l != 691 (OutOfRange otherwise).
 */
int j_generator_valuation(long l, const QExpansion& exp);

/**
 * @brief 691-adic valuation of tau(691) - 1, the generator contributed by
 * the prime 691 itself.  Requires n_max >= 691.
 */
int p_generator_valuation(const QExpansion& exp);

} // namespace ilat
