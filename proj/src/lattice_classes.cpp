#include "ilat/lattice_classes.hpp"

#include <cstddef>
#include <sstream>

#include "ilat/errors.hpp"

namespace ilat {

namespace {

void require_certified(const IdealFactorization& fact) {
    if (!fact.certified)
        throw UncertifiedFactorization(
            "an unresolved factor could split further; no divisor count is "
            "reported for uncertified factorizations");
}

/// Exponent bounds (mu, e_1, ..., e_r) as one coordinate vector.
std::vector<int> bounds_of(const IdealFactorization& fact) {
    std::vector<int> bounds;
    bounds.reserve(fact.factors.size() + 1);
    bounds.push_back(fact.mu);
    for (const PrimeFactorMult& f : fact.factors)
        bounds.push_back(f.multiplicity);
    return bounds;
}

DivisorTuple tuple_from_coords(const std::vector<int>& coords) {
    DivisorTuple t;
    t.a = coords.front();
    t.m.assign(coords.begin() + 1, coords.end());
    return t;
}

std::string label_for(const std::vector<int>& coords,
                      const std::vector<int>& bounds) {
    bool all_zero = true, all_full = true;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        all_zero = all_zero && coords[i] == 0;
        all_full = all_full && coords[i] == bounds[i];
    }
    if (all_zero) return "T_min";
    if (all_full) return "T_max";
    std::ostringstream os;
    os << "T(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) os << ',';
        os << coords[i];
    }
    os << ')';
    return os.str();
}

} // namespace

long count_free(const IdealFactorization& fact) {
    require_certified(fact);
    long n = fact.mu + 1;
    for (const PrimeFactorMult& f : fact.factors) n *= f.multiplicity + 1;
    return n;
}

std::vector<DivisorTuple> divisor_set(const IdealFactorization& fact) {
    require_certified(fact);
    const std::vector<int> bounds = bounds_of(fact);

    std::vector<DivisorTuple> out;
    out.reserve(static_cast<std::size_t>(count_free(fact)));
    std::vector<int> coords(bounds.size(), 0);
    for (;;) {
        out.push_back(tuple_from_coords(coords));
        // Lexicographic odometer: bump the least significant coordinate.
        std::size_t i = coords.size();
        while (i > 0 && coords[i - 1] == bounds[i - 1]) coords[--i] = 0;
        if (i == 0) break;
        ++coords[i - 1];
    }
    return out;
}

DivisorTuple quotient_label(const DivisorTuple& t, const DivisorTuple& t2) {
    if (t.m.size() != t2.m.size())
        throw NotNested("divisor tuples live over different factor lists");
    if (t.a < t2.a)
        throw NotNested("the (p)-exponent of the numerator is smaller");
    DivisorTuple d;
    d.a = t.a - t2.a;
    d.m.reserve(t.m.size());
    for (std::size_t i = 0; i < t.m.size(); ++i) {
        if (t.m[i] < t2.m[i])
            throw NotNested("a factor exponent of the numerator is smaller");
        d.m.push_back(t.m[i] - t2.m[i]);
    }
    return d;
}

VariationSet variation_set(const IdealFactorization& fact, TwistParity parity) {
    require_certified(fact);
    VariationSet v;
    v.base = "L_min";
    if (parity == TwistParity::Odd) {
        v.singleton = true;
        return v;
    }
    v.singleton = false;
    v.multipliers = divisor_set(fact);
    return v;
}

VariationSet unit_base_variation(const IdealFactorization& fact,
                                 bool unit_base_holds) {
    if (!unit_base_holds) return variation_set(fact, TwistParity::Even);
    require_certified(fact);
    VariationSet v;
    v.singleton = false;
    v.base = "1";
    v.multipliers = divisor_set(fact);
    return v;
}

LatticeGraph rectangle_graph(const IdealFactorization& fact) {
    require_certified(fact);
    const std::vector<int> bounds = bounds_of(fact);

    // Place values of the mixed-radix coordinates, least significant last,
    // so vertex index == lexicographic rank.
    std::vector<long> place(bounds.size(), 1);
    for (std::size_t i = bounds.size(); i-- > 1;)
        place[i - 1] = place[i] * (bounds[i] + 1);

    LatticeGraph g;
    g.vertices = divisor_set(fact);
    g.labels.reserve(g.vertices.size());
    std::vector<int> coords(bounds.size());
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        coords[0] = g.vertices[v].a;
        for (std::size_t i = 0; i < g.vertices[v].m.size(); ++i)
            coords[i + 1] = g.vertices[v].m[i];
        g.labels.push_back(label_for(coords, bounds));
        // One edge per coordinate that can still grow; the +1 neighbor has a
        // strictly larger rank, so every edge is emitted exactly once.
        for (std::size_t c = 0; c < coords.size(); ++c) {
            if (coords[c] < bounds[c]) {
                const long w = static_cast<long>(v) + place[c];
                g.edges.emplace_back(static_cast<int>(v), static_cast<int>(w));
            }
        }
    }
    return g;
}

std::string to_dot(const LatticeGraph& graph) {
    std::ostringstream os;
    os << "graph lattice_classes {\n";
    os << "  node [shape=circle];\n";
    for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
        os << "  v" << v << " [label=\"" << graph.labels[v] << '"';
        if (graph.labels[v] == "T_min" || graph.labels[v] == "T_max")
            os << ", shape=doublecircle";
        os << "];\n";
    }
    for (const auto& [x, y] : graph.edges)
        os << "  v" << x << " -- v" << y << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace ilat
