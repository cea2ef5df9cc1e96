#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "ilat/iwasawa.hpp"

namespace ilat {

/**
 * @brief Exponent tuple of one divisor of p^mu * prod P_i^{e_i}: `a` powers
 * of (p) and m_i powers of the i-th distinguished prime, 0 <= a <= mu,
 * 0 <= m_i <= e_i.  Tuples order lexicographically with `a` most significant,
 * so the all-zeros tuple (the unit ideal) comes first and the full tuple
 * (the whole ideal) comes last.
 */
struct DivisorTuple {
    int a = 0;
    std::vector<int> m;

    friend auto operator<=>(const DivisorTuple&, const DivisorTuple&) = default;
};

/**
 * @brief The classes reached by one twist parity, presented as a common base
 * times a set of divisor multipliers.
 *
 * Odd twists vary over a single class: `singleton` is true and there are no
 * multipliers.  Even twists vary over base * every divisor of the ideal, one
 * class per DivisorTuple.
 */
struct VariationSet {
    bool singleton = false;
    std::string base;                      ///< "L_min", or "1" for a unit base
    std::vector<DivisorTuple> multipliers; ///< empty when singleton

    std::size_t size() const { return singleton ? 1 : multipliers.size(); }
};

enum class TwistParity { Odd, Even };

/**
 * @brief The divisor lattice as an undirected graph: vertices are divisor
 * tuples in lexicographic order, with an edge exactly when two tuples differ
 * by 1 in a single coordinate — a rectangle/box graph whose side lengths are
 * the exponents (mu, e_1, ..., e_r).
 *
 * `labels` is parallel to `vertices`: generic vertices read "T(...)" with
 * their coordinates; the two extremes are named "T_min" (all zeros) and
 * "T_max" (the full exponent tuple).
 */
struct LatticeGraph {
    std::vector<DivisorTuple> vertices;
    std::vector<std::pair<int, int>> edges; ///< index pairs, first < second
    std::vector<std::string> labels;
};

/**
 * @brief Number of divisors of the ideal, (mu+1) * prod (e_i + 1) — the
 * count of free stable-lattice classes the factorization governs.
 *
 * Throws UncertifiedFactorization unless every factor is Certified: an
 * unresolved factor might split further and change the product, so no count
 * is reported at all.
 */
long count_free(const IdealFactorization& fact);

/// All divisor tuples in lexicographic order; first is T_min's, last T_max's.
/// Throws UncertifiedFactorization like count_free.
std::vector<DivisorTuple> divisor_set(const IdealFactorization& fact);

/**
 * @brief Componentwise difference t - t2 — the exponent tuple of the ideal
 * cutting out the quotient of the lattice labeled t by the lattice labeled
 * t2.  Throws NotNested unless t >= t2 in every coordinate (and the shapes
 * match).
 */
DivisorTuple quotient_label(const DivisorTuple& t, const DivisorTuple& t2);

/**
 * @brief How the algebraic L-function varies over free lattice classes at a
 * fixed twist parity: odd twists give a singleton {L_min}; even twists give
 * L_min times every divisor, one class per tuple.
 * Throws UncertifiedFactorization.
 */
VariationSet variation_set(const IdealFactorization& fact, TwistParity parity);

/**
 * @brief The even-twist variation set when the minimal class is additionally
 * known to be a unit (`unit_base_holds`): the set then consists of the
 * divisor ideals themselves, base "1".  Without that extra input the answer
 * is the generic variation_set with symbolic base "L_min".
 * Throws UncertifiedFactorization.
 */
VariationSet unit_base_variation(const IdealFactorization& fact,
                                 bool unit_base_holds);

/// The divisor lattice as a graph (see LatticeGraph).
/// Throws UncertifiedFactorization.
LatticeGraph rectangle_graph(const IdealFactorization& fact);

/// Graphviz DOT rendering of the graph: undirected, stable vertex order,
/// T_min and T_max drawn with shape=doublecircle.
std::string to_dot(const LatticeGraph& graph);

} // namespace ilat
