#pragma once

#include <gmpxx.h>

#include <string>

#include "ilat/errors.hpp"

namespace ilat {

/**
 * @brief Outcome of a valuation query at finite precision.
 *
 * At precision N a residue of 0 cannot be told apart from any element of
 * valuation >= N, so the query answers either "exactly value" or
 * "at least value".
 */
struct Valuation {
    int value = 0;
    bool is_lower_bound = false; ///< true: valuation >= value (residue was 0)

    bool exact() const noexcept { return !is_lower_bound; }

    friend bool operator==(const Valuation&, const Valuation&) = default;
};

/**
 * @brief A p-adic integer known modulo p^N.
 *
 * Immutable value type: an odd prime p, a precision N >= 1 and a canonical
 * residue in [0, p^N).  Arithmetic between values of the same p truncates
 * to the smaller precision; combining different primes is an error.
 * Operations that genuinely lose p-adic digits (division by p, logarithm)
 * return results at an explicitly smaller precision instead of padding.
 */
class PAdicInt {
public:
    PAdicInt() = default; ///< invalid placeholder (p = 0); assign before use

    /// Construct from any integer; the residue is reduced into [0, p^N).
    PAdicInt(long p, int N, const mpz_class& value);

    static PAdicInt zero(long p, int N) { return PAdicInt(p, N, 0); }
    static PAdicInt one(long p, int N) { return PAdicInt(p, N, 1); }

    /// num/den as an element of Z_p; requires p not dividing den.
    static PAdicInt from_rational(const mpz_class& num, const mpz_class& den,
                                  long p, int N);
    static PAdicInt from_rational(const mpq_class& q, long p, int N);

    long prime() const noexcept { return p_; }
    int precision() const noexcept { return N_; }
    const mpz_class& residue() const noexcept { return r_; }
    const mpz_class& modulus() const noexcept { return mod_; } ///< p^N

    bool is_zero() const noexcept { return r_ == 0; }
    bool is_unit() const noexcept { return p_ != 0 && r_ % p_ != 0; }

    /// Exact valuation of the residue, or "at least N" when the residue is 0.
    Valuation valuation() const;

    /// Same value at a lower precision N2 <= N.
    PAdicInt truncated(int N2) const;

    /// Exact division by p^k; requires valuation >= k.  Precision drops to N-k.
    PAdicInt shifted_down(int k) const;

    /// Multiplication by p^k at unchanged precision (digits above N are unknown).
    PAdicInt shifted_up(int k) const;

    PAdicInt operator-() const;
    PAdicInt operator+(const PAdicInt& o) const;
    PAdicInt operator-(const PAdicInt& o) const;
    PAdicInt operator*(const PAdicInt& o) const;
    PAdicInt operator*(long s) const;

    /// Multiplicative inverse mod p^N; requires a unit.
    PAdicInt inverse() const;

    /// e-th power (e >= 0) by binary exponentiation mod p^N.
    PAdicInt pow(const mpz_class& e) const;

    /// Equal as stored data: same p, same N, same residue.
    bool operator==(const PAdicInt& o) const = default;

    /// Congruent at the smaller of the two precisions (same p required).
    bool congruent_to(const PAdicInt& o) const;

    std::string str() const { return r_.get_str(); }

private:
    long p_ = 0;
    int N_ = 0;
    mpz_class r_;
    mpz_class mod_;

    void require_compatible(const PAdicInt& o) const;
};

/// p^N as an mpz.
mpz_class p_power(long p, int N);

/// Throws std::invalid_argument unless p is an odd prime and N >= 1.
void check_pN(long p, int N);

/**
 * @brief Teichmüller lift: the unique (p-1)-st root of unity congruent to a
 * mod p, computed as the fixed point of x -> x^p starting from a.
 */
PAdicInt teichmuller(const mpz_class& a, long p, int N);
PAdicInt teichmuller(const PAdicInt& a);

/// One-unit part <a> = a / teichmuller(a); satisfies <a> == 1 mod p.
PAdicInt one_unit_part(const PAdicInt& a);

/// The default topological generator value u = 1 + p.
PAdicInt default_one_unit(long p, int N);

/**
 * @brief p-adic logarithm of a one-unit (x == 1 mod p), via the usual
 * alternating series in (x-1); result carries the full input precision.
 */
PAdicInt log_one_unit(const PAdicInt& x);

/**
 * @brief Exponent s_a with <a> = u^{s_a}, i.e. log<a> / log(u).
 *
 * u must be a one-unit with u == 1+p mod p^2 so that log(u) has valuation
 * exactly 1; the division costs one digit, so the result precision is N-1.
 */
PAdicInt log_exponent(const PAdicInt& a, const PAdicInt& u);

} // namespace ilat
