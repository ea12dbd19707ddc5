#pragma once

#include "pclab/curve.hpp"

#include <memory>

namespace pclab {

// Weight update for flipping edge e inside the quad with sides a, b, c, d (a, c opposite).
struct FlipStep {
    int e, a, b, c, d;
    void apply(std::vector<Int>& w) const {
        Int x = w[a] + w[c], y = w[b] + w[d];
        w[e] = (x > y ? x : y) - w[e];
    }
};

FlipStep flip_step(const Triangulation& T, int e);

// Flip sequence bringing curve a to the core of a two-triangle annulus, plus the
// single-rung moves realizing the twist about a.
struct TwistPlan {
    NormalCurve curve;
    std::vector<FlipStep> to_core;
    Triangulation core_tri;
    int e = -1, f = -1, g = -1, h = -1;  // rungs e, f; boundary edges g (in T1), h (in T2)
    FlipStep pos_flip{}, neg_flip{};
    std::vector<int> pos_perm, neg_perm;  // new weight of edge perm[x] is the flipped weight of x

    // Edge weights of T_a^n(c), n any integer; works for all surfaces.
    std::vector<Int> twist_weights(std::vector<Int> w, long n) const;
    // i(a, c) from edge weights of c; valid on punctured surfaces.
    Int intersection(std::vector<Int> w) const;
};

using TwistPlanPtr = std::shared_ptr<const TwistPlan>;

// Cached per curve.
TwistPlanPtr twist_plan(const NormalCurve& a);

NormalCurve twist(const NormalCurve& a, const NormalCurve& c, long power);

// Intersection numbers through the flip engine (punctured surfaces only).
Int intersection_via_flips(const NormalCurve& a, const NormalCurve& c);

// Dispatcher: explicit minimal position when affordable, flips otherwise on punctured
// surfaces; throws ComplexityLimit for large pairs on closed surfaces.
Int geometric_intersection(const NormalCurve& c, const NormalCurve& d);

// Isotopy test; coordinate equality is canonical on punctured surfaces.
bool same_curve(const NormalCurve& c, const NormalCurve& d);

}  // namespace pclab
