#pragma once

#include "pclab/mcg.hpp"
#include "pclab/predicates.hpp"
#include "pclab/train_track.hpp"

namespace pclab {

// Finite window into a curve graph: vertices are curves, edges follow an EdgeRule.
struct OrbitGraph {
    std::vector<NormalCurve> vertices;
    std::vector<std::vector<int>> adj;  // sorted neighbour lists
    std::vector<std::vector<int>> provenance;  // generator indices (2i for g_i, 2i+1 for its inverse) as a product; the last acts first
    int base = 0;
    EdgeRule rule;
    int skipped_pairs = 0;  // pairs too large for the exact predicate, treated as non-adjacent

    int size() const { return static_cast<int>(vertices.size()); }
    std::uint64_t hash() const;
};

// Plain graph from adjacency lists (used by the oracles and tests).
OrbitGraph graph_from_adjacency(std::vector<std::vector<int>> adj);

OrbitGraph build_orbit_ball(const NormalCurve& base, const std::vector<MappingClass>& generators, int word_radius,
                            const EdgeRule& rule);

// All-pairs BFS distances; -1 for unreachable.
std::vector<std::vector<int>> all_distances(const OrbitGraph& g);

struct DeltaReport {
    double delta = 0;  // largest four-point defect seen
    long tuples = 0;
    bool exhaustive = false;
    std::array<int, 4> worst{};
};

// Four-point defect (largest sum minus middle sum, halved), maximised over 4-subsets; every
// subset when there are at most sample_count of them, otherwise sample_count random ones.
DeltaReport estimate_delta(const OrbitGraph& g, long sample_count, std::uint64_t seed);

struct BottleneckPair {
    int u = 0, v = 0, distance = 0, midpoint = 0;
    int deviation = 0;  // largest r such that some u-v path avoids the open r-ball at the midpoint
};

struct BottleneckReport {
    std::vector<BottleneckPair> pairs;
    int max_deviation = 0;
    double mean_deviation = 0;
    std::vector<int> histogram;  // count per deviation value
    bool exhaustive = false;
};

BottleneckReport bottleneck_report(const OrbitGraph& g, long pair_samples, std::uint64_t seed);

struct OrbitGrowth {
    std::vector<NormalCurve> orbit;                 // phi^k(base), k = 0..n
    std::vector<std::optional<Int>> intersections;  // i(phi^k base, base), when computable
    std::vector<std::optional<int>> pc_bounds;      // witnessed bound on d(phi^k base, base)
    std::optional<PennerOrbit> carrier;             // shared carrier, every certificate verified
    bool carrier_verified = false;
    bool carrier_maximal = true;
    bool witnessed_bounded = false;
    std::optional<int> diameter_bound;
};

OrbitGrowth orbit_growth(const MappingClass& phi, const NormalCurve& base, int n, const EdgeRule& rule,
                         int pc_budget = 0);
// Thurston-Veech orbit of a: additionally tries the Penner carrier of (a, b).
OrbitGrowth orbit_growth(const PseudoAnosovSpec& tv, int n, const EdgeRule& rule, int pc_budget = 0);

}  // namespace pclab
