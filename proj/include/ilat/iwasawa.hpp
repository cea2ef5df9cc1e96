#pragma once

#include <gmpxx.h>

#include <vector>

#include "ilat/padic.hpp"

namespace ilat {

/**
 * @brief Truncated power series over Z_p in the variable T, i.e. an element
 * of Z_p[[T]] known modulo (p^N, T^M).
 *
 * Coefficients are canonical residues in [0, p^N) sharing one (p, N).
 * Mixed arithmetic truncates to the smaller N and the smaller M; mixing
 * different primes is an error.  The weight-k specialization sends
 * T -> u^{k-2}-1 for the fixed topological generator value u (default 1+p).
 */
class IwasawaSeries {
public:
    IwasawaSeries() = default; ///< invalid placeholder; assign before use

    /// Zero series of shape (p, N, M).
    IwasawaSeries(long p, int N, int M);

    /// From arbitrary integers; reduced coefficientwise, padded/cut to M.
    IwasawaSeries(long p, int N, int M, std::vector<mpz_class> coeffs);

    static IwasawaSeries constant(const PAdicInt& c, int M);
    static IwasawaSeries variable(long p, int N, int M); ///< the series T

    long prime() const noexcept { return p_; }
    int precision_p() const noexcept { return N_; }   ///< N
    int truncation() const noexcept { return M_; }    ///< M
    const std::vector<mpz_class>& coefficients() const noexcept { return c_; }
    PAdicInt coefficient(int i) const;

    bool is_zero() const;

    /// Minimum coefficient valuation; equals N when the series is zero.
    int min_valuation() const;

    IwasawaSeries truncated_N(int N2) const;
    IwasawaSeries truncated_M(int M2) const;

    /// Exact division of every coefficient by p^k (requires min_valuation >= k);
    /// the p-precision drops to N-k.
    IwasawaSeries shifted_down_p(int k) const;

    IwasawaSeries operator-() const;
    IwasawaSeries operator+(const IwasawaSeries& g) const;
    IwasawaSeries operator-(const IwasawaSeries& g) const;
    IwasawaSeries operator*(const IwasawaSeries& g) const; ///< Cauchy product
    IwasawaSeries scalar_mul(const PAdicInt& c) const;

    bool operator==(const IwasawaSeries& g) const = default;

    /// Congruent mod (p^min(N), T^min(M)).
    bool congruent_to(const IwasawaSeries& g) const;

    /**
     * @brief Evaluate at the weight-k point t = u^{k-2} - 1 (Horner).
     *
     * Since val(t) >= 1, the discarded tail T^M contributes at most p^-M;
     * the result is returned at the guaranteed precision min(N, M).
     */
    PAdicInt specialize(int k) const;
    PAdicInt specialize(int k, const PAdicInt& u) const;

private:
    long p_ = 0;
    int N_ = 0;
    int M_ = 0;
    std::vector<mpz_class> c_;

    void require_compatible(const IwasawaSeries& g) const;
};

/**
 * @brief Weierstrass preparation data: f = p^mu * distinguished * unit.
 *
 * The distinguished polynomial is monic of degree lambda with non-leading
 * coefficients of valuation >= 1; the unit series has a unit constant term.
 * Both parts are stored at precision part_N = N - mu (dividing out p^mu
 * costs mu digits), but the reconstruction p^mu * D * U matches the input
 * mod (p^guaranteed_N, T^M) with guaranteed_N = N.
 */
struct WeierstrassFactorization {
    int mu = 0;
    int lambda = 0;
    std::vector<mpz_class> distinguished; ///< monic, lowest-degree-first
    IwasawaSeries unit;
    int guaranteed_N = 0;
    long p = 0;
    int part_N = 0; ///< precision of the stored distinguished/unit residues
};

/// Weierstrass preparation of a nonzero truncated series.
WeierstrassFactorization weierstrass(const IwasawaSeries& f);

enum class PrimeKind { PrimeP, Distinguished };
enum class Irreducibility { Certified, Assumed, Unresolved };
enum class CertificateTag { None, Degree1, Eisenstein, NewtonSingleSlope };

/**
 * @brief A height-one prime of Z_p[[T]]: either (p) or (D) for a monic
 * distinguished polynomial D, together with an irreducibility verdict and
 * the certificate that backs a Certified verdict.
 */
struct HeightOnePrimeFactor {
    PrimeKind kind = PrimeKind::PrimeP;
    long p = 0;
    int N = 0;                    ///< residue precision of poly (Distinguished)
    std::vector<mpz_class> poly;  ///< monic, lowest-degree-first; empty for (p)
    Irreducibility irreducibility = Irreducibility::Certified;
    CertificateTag certificate = CertificateTag::None;

    static HeightOnePrimeFactor prime_p(long p);
    static HeightOnePrimeFactor distinguished(long p, int N,
                                              std::vector<mpz_class> poly,
                                              Irreducibility irr,
                                              CertificateTag cert);
    int degree() const { return static_cast<int>(poly.size()) - 1; }
};

/// Order of f at a height-one prime: exact count, or a lower bound when the
/// truncation window or p-precision cannot separate further multiplicity.
struct OrdResult {
    int ord = 0;
    bool at_least = false;

    friend bool operator==(const OrdResult&, const OrdResult&) = default;
};

OrdResult ord_at(const IwasawaSeries& f, const HeightOnePrimeFactor& P);

/// One factor of a distinguished polynomial with its multiplicity.
struct PrimeFactorMult {
    HeightOnePrimeFactor prime;
    int multiplicity = 1;
};

struct DistinguishedFactorization {
    std::vector<PrimeFactorMult> factors;
    int guaranteed_N = 0; ///< re-expanding the factors matches the input here
};

/**
 * @brief A principal ideal of Z_p[[T]] presented as p^mu times a product of
 *        height-one distinguished primes.
 *
 * `certified` is true when every listed factor carries a Certified
 * irreducibility verdict; consumers that enumerate sublattices or divisors
 * must refuse uncertified input rather than silently over- or under-count.
 */
struct IdealFactorization {
    int mu = 0;
    std::vector<PrimeFactorMult> factors; ///< pairwise non-associate primes
    bool certified = false;
};

/**
 * @brief Partial factorization of a monic distinguished polynomial.
 *
 * Simple roots in pZ_p are found segment-by-segment on the Newton polygon
 * (integer slopes only) and Hensel-lifted; what remains is certified
 * irreducible when Eisenstein or single-sloped with coprime invariants,
 * and shipped Unresolved otherwise.
 */
DistinguishedFactorization factor_distinguished(const std::vector<mpz_class>& D,
                                                long p, int N,
                                                int lambda_max = 6);

/// Plain polynomial product with coefficients reduced mod `mod`
/// (lowest-degree-first vectors); used to assemble planted test inputs too.
std::vector<mpz_class> poly_mul_mod(const std::vector<mpz_class>& a,
                                    const std::vector<mpz_class>& b,
                                    const mpz_class& mod);

/// Horner evaluation mod `mod`.
mpz_class poly_eval_mod(const std::vector<mpz_class>& poly, const mpz_class& x,
                        const mpz_class& mod);

} // namespace ilat
