#include "ilat/bernoulli.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>

namespace ilat {

namespace {

/// B_0..B_k by sum_{j=0..n} C(n+1, j) B_j = [n = 0], exact rationals.
std::vector<mpq_class> bernoulli_row(long k) {
    std::vector<mpq_class> row(static_cast<size_t>(k) + 1);
    row[0] = 1;
    mpz_class binom;
    for (long n = 1; n <= k; ++n) {
        mpq_class acc(0);
        for (long j = 0; j < n; ++j) {
            if (row[static_cast<size_t>(j)] == 0) continue;
            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n) + 1,
                         static_cast<unsigned long>(j));
            acc += mpq_class(binom) * row[static_cast<size_t>(j)];
        }
        row[static_cast<size_t>(n)] = -acc / mpq_class(n + 1);
    }
    return row;
}

unsigned long mulmod(unsigned long a, unsigned long b, unsigned long m) {
    return static_cast<unsigned long>(
        (static_cast<unsigned __int128>(a) * b) % m);
}

unsigned long powmod(unsigned long base, unsigned long exp, unsigned long m) {
    unsigned long r = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1UL) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

/// a^{-1} mod p for prime p, p not dividing a.
unsigned long invmod_p(unsigned long a, unsigned long p) {
    return powmod(a, p - 2, p);
}

/**
 * All B_k mod p for 0 <= k <= p-3.  Denominators are units in that range
 * (von Staudt-Clausen: q | den(B_k) needs (q-1) | k <= p-3), so the
 * recurrence B_n = -(sum_{j<n} C(n+1, j) B_j) / (n+1) descends to F_p.
 */
std::vector<unsigned long> bernoulli_mod_p(unsigned long p) {
    const size_t len = static_cast<size_t>(p >= 3 ? p - 2 : 1); // indices 0..p-3
    std::vector<unsigned long> B(len, 0);
    B[0] = 1;

    std::vector<unsigned long> fact(p), ifact(p);
    fact[0] = 1;
    for (unsigned long i = 1; i < p; ++i) fact[i] = mulmod(fact[i - 1], i, p);
    ifact[p - 1] = invmod_p(fact[p - 1], p);
    for (unsigned long i = p - 1; i > 0; --i)
        ifact[i - 1] = mulmod(ifact[i], i, p);
    const auto binom = [&](unsigned long n, unsigned long r) {
        return mulmod(fact[n], mulmod(ifact[r], ifact[n - r], p), p);
    };

    for (unsigned long n = 1; n < len; ++n) {
        unsigned long acc = 0;
        for (unsigned long j = 0; j < n; ++j) {
            if (B[j] == 0) continue;
            acc = (acc + mulmod(binom(n + 1, j), B[j], p)) % p;
        }
        B[n] = mulmod(p - acc % p, invmod_p((n + 1) % p, p), p) % p;
    }
    return B;
}

std::vector<long> primes_up_to(long n) {
    std::vector<long> out;
    if (n < 2) return out;
    std::vector<bool> sieve(static_cast<size_t>(n) + 1, true);
    for (long i = 2; i <= n; ++i) {
        if (!sieve[static_cast<size_t>(i)]) continue;
        out.push_back(i);
        for (long m = i * i; m <= n; m += i) sieve[static_cast<size_t>(m)] = false;
    }
    return out;
}

std::vector<std::pair<long, long>> pairs_for_prime(long p) {
    std::vector<std::pair<long, long>> out;
    if (p < 7) return out; // the range 2..p-3 holds no zero residues below 7
    const auto B = bernoulli_mod_p(static_cast<unsigned long>(p));
    for (long k = 2; k <= p - 3; k += 2) {
        if (B[static_cast<size_t>(k)] == 0) out.emplace_back(p, k);
    }
    return out;
}

int val_p_long(long n, long p) {
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

} // namespace

OmegaPowerCharacter::OmegaPowerCharacter(long p_in, long j_raw) : p(p_in) {
    check_pN(p_in, 1);
    const long order = p - 1;
    j = ((j_raw % order) + order) % order;
}

PAdicInt OmegaPowerCharacter::operator()(const mpz_class& a, int N) const {
    if (mpz_divisible_ui_p(a.get_mpz_t(), static_cast<unsigned long>(p)))
        return PAdicInt::zero(p, N);
    return teichmuller(a, p, N).pow(j);
}

ExactRational bernoulli(long k) {
    if (k < 0) throw RangeError("bernoulli index must be >= 0");
    return bernoulli_row(k).back();
}

bool is_irregular_pair(long p, long k) {
    check_pN(p, 1);
    if (k < 2 || k % 2 != 0)
        throw RangeError("irregularity is asked of even indices k >= 2");

    // (p-1) | k: von Staudt-Clausen gives p*B_k = -1 mod p, a unit numerator.
    if (k % (p - 1) == 0) return false;
    // p | k with (p-1) not dividing k: Adams' theorem, val_p(B_k) >= val_p(k).
    if (k % p == 0) return true;
    // Kummer congruence B_k / k = B_{k'} / k' mod p pulls k into 2..p-3.
    if (k > p - 3) k = k % (p - 1);

    // sum_{a=1..p-1} a^k = p * B_k (mod p^2) for even 2 <= k <= p-3.
    const unsigned long up = static_cast<unsigned long>(p);
    const unsigned long p2 = up * up;
    unsigned long s = 0;
    for (unsigned long a = 1; a < up; ++a) {
        s = (s + powmod(a, static_cast<unsigned long>(k), p2)) % p2;
    }
    return s == 0;
}

std::vector<std::pair<long, long>> scan_irregular_pairs(long p_max) {
    const std::vector<long> primes = primes_up_to(p_max);
    std::vector<std::vector<std::pair<long, long>>> per_prime(primes.size());

    std::atomic<size_t> cursor{0};
    const auto worker = [&]() {
        for (;;) {
            const size_t i = cursor.fetch_add(1);
            if (i >= primes.size()) break;
            per_prime[i] = pairs_for_prime(primes[i]);
        }
    };
    const size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const size_t extra = std::min(hw - 1, primes.size() > 0 ? primes.size() - 1 : 0);
    std::vector<std::thread> pool;
    pool.reserve(extra);
    for (size_t t = 0; t < extra; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<std::pair<long, long>> out;
    for (const auto& chunk : per_prime) out.insert(out.end(), chunk.begin(), chunk.end());
    return out;
}

PAdicInt generalized_bernoulli_times_p(long n, const OmegaPowerCharacter& chi,
                                       int N) {
    if (n < 1) throw RangeError("generalized Bernoulli index must be >= 1");
    const long p = chi.p;
    check_pN(p, N);

    if (chi.trivial()) {
        // Conductor 1: p * B_n(1); the at-worst-one p in the denominator
        // (von Staudt-Clausen) cancels, so the embedding always exists.
        mpq_class v = bernoulli(n);
        if (n == 1) v += 1;
        v *= p;
        return PAdicInt::from_rational(v, p, N);
    }

    // chi(-1) = (-1)^j: odd-against-even pairings vanish identically.
    if ((chi.j % 2) != (n % 2)) return PAdicInt::zero(p, N);

    // R(a) = p^n B_n(a/p) = sum_i C(n,i) B_i a^{n-i} p^i is p-integral, and
    // p * B_{n,chi} = sum_{a=1..p-1} chi(a) R(a).
    const auto row = bernoulli_row(n);
    std::vector<mpq_class> c(static_cast<size_t>(n) + 1);
    mpz_class binom, ppow(1);
    for (long i = 0; i <= n; ++i) {
        mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n),
                     static_cast<unsigned long>(i));
        c[static_cast<size_t>(i)] =
            mpq_class(binom) * row[static_cast<size_t>(i)] * mpq_class(ppow);
        ppow *= p;
    }

    PAdicInt acc = PAdicInt::zero(p, N);
    for (long a = 1; a < p; ++a) {
        mpq_class R(0); // Horner: R(a) = sum_i c_i a^{n-i}
        for (long i = 0; i <= n; ++i) {
            R = R * a + c[static_cast<size_t>(i)];
        }
        acc = acc + chi(a, N) * PAdicInt::from_rational(R, p, N);
    }
    return acc;
}

PAdicInt generalized_bernoulli(long n, const OmegaPowerCharacter& chi, int N) {
    if (n < 1) throw RangeError("generalized Bernoulli index must be >= 1");
    const long p = chi.p;
    check_pN(p, N);

    if (chi.trivial()) {
        // Conductor 1: B_n(1) = B_n + [n = 1]  (so B_{1,1} = +1/2).
        mpq_class v = bernoulli(n);
        if (n == 1) v += 1;
        if (mpz_divisible_ui_p(v.get_den().get_mpz_t(),
                               static_cast<unsigned long>(p)))
            throw DenominatorNotUnit(
                "B_n has p in its denominator ((p-1) | n); not an element of Z_p");
        return PAdicInt::from_rational(v, p, N);
    }

    const PAdicInt acc = generalized_bernoulli_times_p(n, chi, N + 1);
    const Valuation v = acc.valuation();
    if (v.value < 1)
        throw DenominatorNotUnit(
            "the character sum is a p-unit: B_{n,chi} has p in its denominator");
    return acc.shifted_down(1);
}

PAdicInt lp_value(long p, long m, long n, int N) {
    if (n < 1) throw RangeError("special values are taken at 1-n with n >= 1");
    check_pN(p, N);

    const int v = val_p_long(n, p);
    const int Nw = N + v;
    const OmegaPowerCharacter chi(p, m - n);

    PAdicInt value = -generalized_bernoulli(n, chi, Nw);
    if (chi.trivial()) {
        // Twist of conductor 1: Euler factor 1 - p^{n-1} survives.
        value = value * PAdicInt(p, Nw, 1 - p_power(p, n - 1));
    }

    long pv = 1;
    for (int i = 0; i < v; ++i) pv *= p;
    const long unit = n / pv;
    value = value * PAdicInt(p, Nw, unit).inverse();
    if (v > 0) {
        const Valuation vv = value.valuation();
        if (vv.value < v)
            throw DenominatorNotUnit(
                "dividing by n leaves p in the denominator of the special value");
        value = value.shifted_down(v);
    }
    return value;
}

} // namespace ilat
