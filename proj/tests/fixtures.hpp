#pragma once

#include "pclab/flips.hpp"
#include "pclab/mcg.hpp"
#include "pclab/predicates.hpp"
#include "pclab/train_track.hpp"

namespace fixture {

using namespace pclab;

struct Pair {
    NormalCurve a, b;
};

inline std::vector<SurfacePtr> corpus_surfaces() {
    return {build_surface(2, 0), build_surface(3, 0), build_surface(0, 5), build_surface(1, 2)};
}

// Random pair k of a deterministic stream on S.
inline Pair random_pair(const SurfacePtr& S, std::uint64_t k, int bound = 2) {
    return {random_curve(S, 2 * k, bound), random_curve(S, 2 * k + 1, bound)};
}

// Random pair whose second curve is twisted along one or two short random curves; these fill
// far more often than independent short curves.
inline Pair twisted_pair(const SurfacePtr& S, std::uint64_t k) {
    NormalCurve a = random_curve(S, 5 * k, 2), b = random_curve(S, 5 * k + 1, 2);
    for (int j = 0; j < 2; ++j) {
        NormalCurve z = random_curve(S, 5 * k + 2 + j, 2);
        b = twist(z, b, j % 2 ? 1 : -1);
    }
    return {a, b};
}

inline bool is_binding(const Pair& p, long limit = 4000000) {
    if (!explicit_feasible(p.a, p.b, ExplicitLimits{limit}) || same_curve(p.a, p.b)) return false;
    PairMap g = minimal_pair(p.a, p.b);
    return g.V > 0 && trace_regions(g).binds;
}

// First `count` binding pairs of the twisted stream starting at `from`.
inline std::vector<Pair> binding_pairs(const SurfacePtr& S, int count, std::uint64_t from = 0, long limit = 400000) {
    std::vector<Pair> out;
    for (std::uint64_t k = from; static_cast<int>(out.size()) < count && k < from + 200000; ++k) {
        Pair p = twisted_pair(S, k);
        if (is_binding(p, limit)) out.push_back(p);
    }
    return out;
}

// Principal Thurston-Veech pair on S_{1,2} with i(a, b) = t.
inline Pair principal_pair(int t) {
    SurfacePtr S = build_surface(1, 2);
    for (std::uint64_t i = 0; i < 40000; ++i) {
        NormalCurve a = random_curve(S, 2 * i, 2), b = random_curve(S, 2 * i + 1, 3);
        PairMap g = minimal_pair(a, b);
        if (g.V != t) continue;
        RegionProfile p = trace_regions(g);
        if (!p.binds || !stratum_signature(p).principal) continue;
        return {a, b};
    }
    fail("NotFound", "no principal pair in the search window");
}

// Octagon Thurston-Veech pair on S_{1,2} whose collapsed Penner track is efficient.
inline Pair octagon_pair() {
    SurfacePtr S = build_surface(1, 2);
    const std::uint64_t i = 32;
    NormalCurve a = random_curve(S, 7 * i, 2), c = random_curve(S, 7 * i + 1, 2);
    for (int k = 0; k < 2; ++k) {
        NormalCurve z = random_curve(S, 7 * i + 2 + k, 2);
        if (coreable(z)) c = twist(z, c, k % 2 ? 1 : -1);
    }
    return {a, c};
}

// First curve pair on S with geometric intersection exactly n.
inline Pair pair_with_intersection(const SurfacePtr& S, int n, std::uint64_t from = 0) {
    for (std::uint64_t k = from; k < from + 100000; ++k) {
        Pair p = random_pair(S, k);
        if (!same_curve(p.a, p.b) && geometric_intersection(p.a, p.b) == n) return p;
    }
    fail("NotFound", "no pair with the requested intersection");
}

}  // namespace fixture
