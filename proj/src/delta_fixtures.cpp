#include "ilat/delta_fixtures.hpp"

#include <cstddef>

#include "ilat/errors.hpp"

namespace ilat {

namespace {

bool is_small_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

void require_prime_in_range(long l, const QExpansion& exp) {
    if (!is_small_prime(l))
        throw OutOfRange("l = " + std::to_string(l) + " is not prime");
    if (l > exp.n_max)
        throw OutOfRange("l = " + std::to_string(l) + " exceeds n_max = " +
                         std::to_string(exp.n_max));
}

int valuation_at(mpz_class x, long q) {
    if (x == 0) throw OutOfRange("valuation of zero is undefined");
    int v = 0;
    while (mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(q))) {
        x /= q;
        ++v;
    }
    return v;
}

}  // namespace

const mpz_class& QExpansion::at(long n) const {
    if (n < 1 || n > n_max)
        throw OutOfRange("tau(" + std::to_string(n) + ") is outside 1.." +
                         std::to_string(n_max));
    return tau[static_cast<std::size_t>(n - 1)];
}

QExpansion tau_coefficients(long n_max) {
    if (n_max < 1) throw OutOfRange("n_max must be >= 1");
    const std::size_t len = static_cast<std::size_t>(n_max);

    // Euler's pentagonal-number series: prod (1 - q^n) has coefficient
    // (-1)^k exactly at the exponents k(3k -+ 1)/2 and 0 elsewhere.
    std::vector<mpz_class> euler(len, 0);
    euler[0] = 1;
    for (long k = 1; k * (3 * k - 1) / 2 < n_max; ++k) {
        const mpz_class sign = (k % 2 == 0) ? 1 : -1;
        euler[static_cast<std::size_t>(k * (3 * k - 1) / 2)] = sign;
        const long e2 = k * (3 * k + 1) / 2;
        if (e2 < n_max) euler[static_cast<std::size_t>(e2)] = sign;
    }

    auto mul = [len](const std::vector<mpz_class>& f, const std::vector<mpz_class>& g) {
        std::vector<mpz_class> h(len, 0);
        for (std::size_t i = 0; i < len; ++i) {
            if (f[i] == 0) continue;
            for (std::size_t j = 0; i + j < len; ++j)
                if (g[j] != 0)
                    mpz_addmul(h[i + j].get_mpz_t(), f[i].get_mpz_t(), g[j].get_mpz_t());
        }
        return h;
    };

    // 24 = 0b11000: square-and-multiply, most significant bit first.
    std::vector<mpz_class> acc = euler;
    for (int bit : {1, 0, 0, 0}) {
        acc = mul(acc, acc);
        if (bit) acc = mul(acc, euler);
    }

    QExpansion out;
    out.n_max = n_max;
    out.tau = std::move(acc);  // the shift by q makes coefficient i into tau(i+1)
    return out;
}

bool eisenstein_congruence(long l, const QExpansion& exp) {
    require_prime_in_range(l, exp);
    mpz_class rhs;
    mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(l), 11);
    rhs += 1;
    return mpz_congruent_p(exp.at(l).get_mpz_t(), rhs.get_mpz_t(),
                           mpz_class(weight12_congruence_prime).get_mpz_t()) != 0;
}

int j_generator_valuation(long l, const QExpansion& exp) {
    if (l == weight12_congruence_prime)
        throw OutOfRange("the generator at l = 691 is tau(691) - 1; use the p-generator");
    require_prime_in_range(l, exp);
    mpz_class lp;
    mpz_ui_pow_ui(lp.get_mpz_t(), static_cast<unsigned long>(l), 11);
    return valuation_at(exp.at(l) - 1 - lp, weight12_congruence_prime);
}

int p_generator_valuation(const QExpansion& exp) {
    return valuation_at(exp.at(weight12_congruence_prime) - 1, weight12_congruence_prime);
}

} // namespace ilat
