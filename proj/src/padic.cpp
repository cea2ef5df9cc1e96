#include "ilat/padic.hpp"

#include <stdexcept>

namespace ilat {

mpz_class p_power(long p, int N) {
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(N));
    return m;
}

void check_pN(long p, int N) {
    if (p < 3)
        throw std::invalid_argument("prime must be an odd prime, got " +
                                    std::to_string(p));
    mpz_class pz = p;
    if (mpz_probab_prime_p(pz.get_mpz_t(), 30) == 0)
        throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (N < 1)
        throw std::invalid_argument("precision must be >= 1, got " +
                                    std::to_string(N));
}

PAdicInt::PAdicInt(long p, int N, const mpz_class& value)
    : p_(p), N_(N), mod_(p_power(p, N)) {
    check_pN(p, N);
    mpz_mod(r_.get_mpz_t(), value.get_mpz_t(), mod_.get_mpz_t());
}

PAdicInt PAdicInt::from_rational(const mpz_class& num, const mpz_class& den,
                                 long p, int N) {
    check_pN(p, N);
    if (den == 0) throw std::invalid_argument("zero denominator");
    if (den % p == 0)
        throw DenominatorNotUnit("denominator " + den.get_str() +
                                 " is divisible by p = " + std::to_string(p));
    mpz_class mod = p_power(p, N);
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw DenominatorNotUnit("denominator not invertible mod p^N");
    return PAdicInt(p, N, num * inv);
}

PAdicInt PAdicInt::from_rational(const mpq_class& q, long p, int N) {
    return from_rational(q.get_num(), q.get_den(), p, N);
}

Valuation PAdicInt::valuation() const {
    if (r_ == 0) return {N_, true};
    int v = 0;
    mpz_class t = r_;
    while (mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p_))) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(),
                        static_cast<unsigned long>(p_));
        ++v;
    }
    return {v, false};
}

PAdicInt PAdicInt::truncated(int N2) const {
    if (N2 == N_) return *this;
    if (N2 < 1 || N2 > N_)
        throw std::invalid_argument("cannot truncate precision " +
                                    std::to_string(N_) + " to " +
                                    std::to_string(N2));
    return PAdicInt(p_, N2, r_);
}

PAdicInt PAdicInt::shifted_down(int k) const {
    if (k == 0) return *this;
    if (k < 0 || k >= N_)
        throw InsufficientPrecision("cannot divide by p^" + std::to_string(k) +
                                    " at precision " + std::to_string(N_));
    mpz_class pk = p_power(p_, k);
    if (!mpz_divisible_p(r_.get_mpz_t(), pk.get_mpz_t()))
        throw NotAUnit("element has valuation < " + std::to_string(k) +
                       "; exact division by p^" + std::to_string(k) +
                       " impossible");
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), r_.get_mpz_t(), pk.get_mpz_t());
    return PAdicInt(p_, N_ - k, q);
}

PAdicInt PAdicInt::shifted_up(int k) const {
    if (k < 0) throw std::invalid_argument("negative shift");
    return PAdicInt(p_, N_, r_ * p_power(p_, k));
}

void PAdicInt::require_compatible(const PAdicInt& o) const {
    if (p_ == 0 || o.p_ == 0)
        throw std::invalid_argument("arithmetic on uninitialized PAdicInt");
    if (p_ != o.p_)
        throw PrecisionMismatch("mixing primes " + std::to_string(p_) +
                                " and " + std::to_string(o.p_));
}

PAdicInt PAdicInt::operator-() const { return PAdicInt(p_, N_, mod_ - r_); }

PAdicInt PAdicInt::operator+(const PAdicInt& o) const {
    require_compatible(o);
    int N = std::min(N_, o.N_);
    return PAdicInt(p_, N, r_ + o.r_);
}

PAdicInt PAdicInt::operator-(const PAdicInt& o) const {
    require_compatible(o);
    int N = std::min(N_, o.N_);
    return PAdicInt(p_, N, r_ - o.r_);
}

PAdicInt PAdicInt::operator*(const PAdicInt& o) const {
    require_compatible(o);
    int N = std::min(N_, o.N_);
    return PAdicInt(p_, N, r_ * o.r_);
}

PAdicInt PAdicInt::operator*(long s) const {
    return PAdicInt(p_, N_, r_ * s);
}

PAdicInt PAdicInt::inverse() const {
    if (!is_unit())
        throw NotAUnit("residue " + r_.get_str() + " is not a unit mod " +
                       std::to_string(p_));
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), r_.get_mpz_t(), mod_.get_mpz_t());
    return PAdicInt(p_, N_, inv);
}

PAdicInt PAdicInt::pow(const mpz_class& e) const {
    if (e < 0) return inverse().pow(-e);
    mpz_class out;
    mpz_powm(out.get_mpz_t(), r_.get_mpz_t(), e.get_mpz_t(), mod_.get_mpz_t());
    return PAdicInt(p_, N_, out);
}

bool PAdicInt::congruent_to(const PAdicInt& o) const {
    require_compatible(o);
    int N = std::min(N_, o.N_);
    mpz_class mod = p_power(p_, N);
    mpz_class d = r_ - o.r_;
    return mpz_divisible_p(d.get_mpz_t(), mod.get_mpz_t()) != 0;
}

PAdicInt teichmuller(const mpz_class& a, long p, int N) {
    check_pN(p, N);
    if (a % p == 0)
        throw NotAUnit("Teichmüller lift needs a unit; " + a.get_str() +
                       " is divisible by " + std::to_string(p));
    mpz_class mod = p_power(p, N);
    mpz_class x;
    mpz_mod(x.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t());
    // x -> x^p gains one digit of stability per step; N steps always suffice.
    for (int i = 0; i < N; ++i) {
        mpz_class next;
        mpz_powm_ui(next.get_mpz_t(), x.get_mpz_t(),
                    static_cast<unsigned long>(p), mod.get_mpz_t());
        if (next == x) break;
        x = next;
    }
    return PAdicInt(p, N, x);
}

PAdicInt teichmuller(const PAdicInt& a) {
    if (!a.is_unit()) throw NotAUnit("Teichmüller lift of a non-unit");
    return teichmuller(a.residue(), a.prime(), a.precision());
}

PAdicInt one_unit_part(const PAdicInt& a) {
    if (!a.is_unit()) throw NotAUnit("one-unit part of a non-unit");
    return a * teichmuller(a).inverse();
}

PAdicInt default_one_unit(long p, int N) {
    return PAdicInt(p, N, mpz_class(p + 1));
}

PAdicInt log_one_unit(const PAdicInt& x) {
    long p = x.prime();
    int N = x.precision();
    if ((x.residue() - 1) % p != 0)
        throw NotAUnit("p-adic log defined here only for one-units");

    // Work at precision W = N + D where D covers every division by the term
    // index n: terms (x-1)^n/n vanish mod p^N once n - v_p(n) >= N, so the
    // indices used stay below N + D with p^D > N + D.
    int D = 0;
    {
        mpz_class pd = 1;
        while (pd <= N + D + 1) { pd *= p; ++D; }
    }
    int W = N + D;
    mpz_class modW = p_power(p, W);
    mpz_class y;
    mpz_mod(y.get_mpz_t(), mpz_class(x.residue() - 1).get_mpz_t(),
            modW.get_mpz_t());

    mpz_class sum = 0;
    mpz_class ypow = 1;
    for (int n = 1; n <= N + D; ++n) {
        ypow = (ypow * y) % modW;
        if (ypow == 0) break;
        // term = (-1)^{n+1} y^n / n, with the p-part of n divided out exactly
        long nv = 0;
        long nu = n;
        while (nu % p == 0) { nu /= p; ++nv; }
        mpz_class t = ypow;
        for (long i = 0; i < nv; ++i) {
            // y^n has valuation >= n > v_p(n), so these divisions are exact
            mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(),
                            static_cast<unsigned long>(p));
        }
        mpz_class inv_nu;
        mpz_class nuz = nu;
        mpz_invert(inv_nu.get_mpz_t(), nuz.get_mpz_t(), modW.get_mpz_t());
        t = (t * inv_nu) % modW;
        if (n % 2 == 0) t = -t;
        sum = (sum + t) % modW;
    }
    return PAdicInt(p, N, sum);
}

PAdicInt log_exponent(const PAdicInt& a, const PAdicInt& u) {
    long p = a.prime();
    int N = std::min(a.precision(), u.precision());
    if (N < 2)
        throw InsufficientPrecision(
            "log_exponent needs precision >= 2 (one digit is spent dividing "
            "by log u)");
    if (!a.is_unit()) throw NotAUnit("log_exponent of a non-unit");
    mpz_class p2 = p_power(p, 2);
    if ((u.residue() - (p + 1)) % p2 != 0)
        throw std::invalid_argument("u must satisfy u == 1+p mod p^2");

    PAdicInt la = log_one_unit(one_unit_part(a.truncated(N)));
    PAdicInt lu = log_one_unit(u.truncated(N));
    // log u has valuation exactly 1, so the quotient lives at precision N-1.
    return la.shifted_down(1) * lu.shifted_down(1).inverse();
}

} // namespace ilat
