#pragma once

#include "pclab/regions.hpp"

#include <optional>

namespace pclab {

struct EdgeRule {
    enum Kind { CurveGraph, CG0, Principal, Intermediate };
    Kind kind = Principal;
    int punctured_threshold = 4;

    // cg | cg0 | principal | principal6 | intermediate; throws InvalidRule otherwise.
    static EdgeRule parse(const std::string& name);
    std::string name() const;
};

struct EdgeVerdict {
    bool adjacent = false;
    Int intersection = 0;
    std::vector<int> witness_faces;  // indices into profile.faces
    RegionProfile profile;
};

// Rule evaluation on a census of a pair in minimal position with at least one crossing.
bool rule_holds(const RegionProfile& p, const EdgeRule& rule, std::vector<int>* witness = nullptr);

// Disjoint non-isotopic curves leave a non-pants complementary piece iff 3g-3+m >= 3.
bool disjoint_pair_has_extra_curve(const SurfaceSpec& s);

EdgeVerdict edge_verdict(const NormalCurve& c, const NormalCurve& d, const EdgeRule& rule);
bool adjacent(const NormalCurve& c, const NormalCurve& d, const EdgeRule& rule);

// Essential curve disjoint from c and d, pushed off a boundary cycle of a non-disc face.
std::optional<NormalCurve> face_witness_curve(const PairMap& g, const FaceRecord& f);

struct CgDistance {
    int value = 0;  // 0, 1, 2, or 3 meaning ">= 3"
    std::optional<NormalCurve> witness;
};
CgDistance cg_distance_class(const NormalCurve& c, const NormalCurve& d);

// 0, 1, or 2 meaning ">= 2" (the pair completely fills).
int pc_distance_class(const NormalCurve& c, const NormalCurve& d, const EdgeRule& rule);

struct ChainLink {
    enum Kind { Predicate, Carrier };
    Kind kind = Predicate;
    int carrier_stage = -1;  // index into the splitting sequence used as carrier
};

struct PcBound {
    std::optional<int> bound;       // empty when no chain was found within budget
    std::vector<NormalCurve> chain;  // c = chain.front(), d = chain.back()
    std::vector<ChainLink> links;
    int candidates = 0;
};

// Upper bound on the distance from an explicit edge path; budget bounds the number of
// candidate curves and splitting stages examined.
PcBound pc_upper_bound(const NormalCurve& c, const NormalCurve& d, const EdgeRule& rule, int budget = 200);

}  // namespace pclab
