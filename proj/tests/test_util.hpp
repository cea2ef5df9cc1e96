#pragma once

#include <gmpxx.h>

// Deterministic 64-bit LCG so test data is reproducible across runs/platforms.
struct Lcg {
    unsigned long long state;
    explicit Lcg(unsigned long long seed) : state(seed) {}
    unsigned long long next() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return state >> 1;
    }
    long next_long(long bound) {
        return static_cast<long>(next() % static_cast<unsigned long long>(bound));
    }
    mpz_class next_mpz(const mpz_class& bound) {
        mpz_class acc = 0;
        for (int i = 0; i < 4; ++i) {
            acc <<= 62;
            acc += static_cast<unsigned long>(next());
        }
        return acc % bound;
    }
};
