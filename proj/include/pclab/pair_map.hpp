#pragma once

#include "pclab/curve.hpp"

namespace pclab {

struct RegionData {
    int chi = 0;                    // Euler characteristic, punctures filled in
    std::vector<int> punctures;     // puncture vertex ids inside the region
    int vertices = 0;               // all triangulation vertices, marked vertex included
};

// The 4-valent graph c u d in minimal position. Darts 4v+k are in ccw order around
// vertex v; even k are c-darts, odd k are d-darts. region[x] is the face on the right of x.
struct PairMap {
    SurfacePtr surface;
    int V = 0;
    std::vector<int> alpha;
    std::vector<Word> word;  // crossing word from the vertex of x to the vertex of alpha(x)
    std::vector<int> region;
    std::vector<RegionData> regions;
    bool isotopic = false;  // meaningful when V == 0

    int sigma(int x) const { return (x & ~3) | ((x + 1) & 3); }
    int sigma_inv(int x) const { return (x & ~3) | ((x + 3) & 3); }
    int opposite(int x) const { return (x & ~3) | ((x + 2) & 3); }
    int phi(int x) const { return sigma(alpha[x]); }
    bool is_c(int x) const { return (x & 1) == 0; }
    int num_darts() const { return 4 * V; }
};

struct ExplicitLimits {
    long max_product = 40000000;  // bound on (total weight of c) * (total weight of d)
};

bool explicit_feasible(const NormalCurve& c, const NormalCurve& d, const ExplicitLimits& lim = {});

// Puts c, d in normal position, builds the crossing map and removes bigons until none remain.
PairMap minimal_pair(const NormalCurve& c, const NormalCurve& d, const ExplicitLimits& lim = {});

// minimal_pair with the embed_pair contract: throws DisjointPair / EqualCurves.
PairMap embed_pair(const NormalCurve& c, const NormalCurve& d);

// T_a^n(c) by resolving every crossing of the minimal pair (a, c) with n copies of a.
NormalCurve surgery_twist(const NormalCurve& a, const NormalCurve& c, long n);

// True iff a can be flipped to the core of a two-triangle annulus, i.e. both sides of a
// contain a vertex of the triangulation.
bool coreable(const NormalCurve& a);

// Consistency checks on the rotation system; throws MalformedGraph.
void check_pair_map(const PairMap& g);

}  // namespace pclab
