#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ilat/bernoulli.hpp"
#include "ilat/iwasawa.hpp"
#include "ilat/padic.hpp"

namespace ilat {

/// How a branch series was produced.  AlternateRun marks cross-check variants
/// (shifted node set and/or extra working digits); variants never touch the
/// disk cache, so they cannot shadow the canonical construction.
enum class KLConstruction { InterpolationSolve, AlternateRun };

/**
 * @brief Tuning knobs for kl_series.  The defaults give the canonical run.
 *
 * `cache_dir`: when non-empty, canonical runs are read from / written to
 * `<cache_dir>/kl-p{p}-j{j}-N{N}-M{M}.v1.txt`.  Entries are checksummed;
 * corrupt or mismatched files are recomputed and atomically replaced
 * (temp file + rename), so concurrent readers with a single writer per key
 * see either the old or the new entry, never a torn one.
 *
 * `alternate_nodes`: offsets the interpolation weights from k = 2, 3, ... to
 * k = 2+offset, 3+offset, ...; `extra_working` adds p-digits on top of the
 * exact divided-difference loss budget.  Setting either marks the result
 * AlternateRun — they exist so an independent construction can confirm the
 * canonical coefficients.
 *
 * `working_ceiling` caps the internal precision; a request whose budget
 * exceeds it throws InsufficientPrecision instead of silently degrading.
 */
struct KLOptions {
    std::string cache_dir;
    int working_ceiling = 64;
    long alternate_nodes = 0; ///< node-set offset; 0 = canonical k = 2, 3, ...
    int extra_working = 0;    ///< digits beyond the exact loss budget
};

/**
 * @brief One odd branch of the p-adic L-function as a truncated series.
 *
 * For the branch character omega^j (j odd mod p-1) the series G satisfies,
 * at every weight k >= 2 with u = 1 + p and t = u^{k-2} - 1,
 *
 *   G(t) = L_p(1-k, omega^{j+1-k})              when j != -1 mod p-1,
 *   G(t) = (u^k - 1) * L_p(1-k, omega^{1-k})    when j == -1 mod p-1
 *
 * (the second branch clears the simple pole of the trivial-character
 * L-function).  Coefficients are correct modulo p^guaranteed_N.
 */
struct KLSeries {
    OmegaPowerCharacter chi; ///< the branch character omega^j
    IwasawaSeries series;    ///< mod (p^guaranteed_N, T^M)
    int guaranteed_N = 0;
    KLConstruction construction = KLConstruction::InterpolationSolve;
};

/**
 * @brief Right-hand side of the interpolation identity for branch omega^j at
 * weight k >= 2, i.e. lp_value(p, (j+1) mod (p-1), k, N), times (u^k - 1) on
 * the branch j == -1 mod (p-1).
 *
 * On that branch the plain special value has its pole in the chi = omega^{-k}
 * slot, so the product is computed with the pole cleared:
 *
 *   (u^k - 1) L_p(1-k, omega^{1-k})
 *       = -E_k * (p B_{k, omega^{-k}}) * (u^k - 1) / (p k),
 *
 * with E_k = 1 - p^{k-1} when (p-1) | k and E_k = 1 otherwise.  Both
 * (u^k - 1) and p*k have valuation exactly 1 + val_p(k), so the division is
 * exact in Z_p and the result carries the full requested precision.
 *
 * Throws EvenCharacter when j is even and RangeError when k < 2.
 */
PAdicInt kl_special_value(long p, long j, long k, int N);

/**
 * @brief Construct the branch series by interpolation.
 *
 * Samples the special values at the M+N weights k = 2 .. M+N+1 (offset by
 * `alternate_nodes`), solves for the Newton form by divided differences over
 * Z_p — the node differences t_a - t_b have valuation exactly
 * 1 + val_p(a - b), so column c of the triangle costs exactly that many
 * digits — converts to monomial coefficients, and keeps degrees < M.
 *
 * Working precision is N plus the exact total loss
 * (M+N-1) + val_p((M+N-1)!) plus `extra_working`.  Sampling N weights past
 * the kept window leaves every kept coefficient with a truncation-tail error
 * of valuation >= N+1, so the canonical run reports guaranteed_N = N.
 *
 * Throws EvenCharacter when j is even, RangeError when N < 2 or M < 2, and
 * InsufficientPrecision when the working precision would exceed
 * opts.working_ceiling.
 */
KLSeries kl_series(long p, long j, int N, int M, const KLOptions& opts = {});

/// (mu, lambda) of the Weierstrass preparation of the branch series.
std::pair<int, int> iwasawa_invariants(const KLSeries& kl);

/**
 * @brief Height-one factorization of the ideal generated by the branch
 * series: mu copies of (p) recorded in the mu field, plus the
 * factor_distinguished output on the distinguished part.  `certified` is the
 * conjunction of the per-factor irreducibility verdicts.
 *
 * Throws RangeError when the distinguished degree exceeds lambda_max, and
 * propagates the weierstrass errors on degenerate input.
 */
IdealFactorization kl_factorization(const KLSeries& kl, int lambda_max = 6);

/// One row of an interpolation re-check at a given weight.
struct InterpolationCheck {
    long weight = 0;
    bool ok = false;
    PAdicInt lhs;      ///< specialization of the stored series
    PAdicInt rhs;      ///< independently recomputed special value
    int precision = 0; ///< digits compared: min(guaranteed_N, M)
};

/**
 * @brief Recompute both sides of the interpolation identity at the given
 * weights — any k >= 2 is accepted, including weights beyond the
 * construction window, which is the real test that the series (and not just
 * the fit) is correct.  Mismatches are rows with ok = false, not exceptions.
 */
std::vector<InterpolationCheck> verify_interpolation(
    const KLSeries& kl, const std::vector<long>& weights);

} // namespace ilat
