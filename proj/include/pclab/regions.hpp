#pragma once

#include "pclab/pair_map.hpp"

namespace pclab {

enum class FaceKind { Polygon, PuncturedPolygon, Essential };
const char* kind_name(FaceKind k);

struct FaceRecord {
    int region = -1;
    int side_count = 0;
    std::vector<std::vector<int>> boundary;  // phi-cycles of darts
    std::vector<int> puncture_vertices;
    int puncture_count = 0;
    int euler_char = 0;
    FaceKind kind = FaceKind::Essential;
};

struct RegionProfile {
    SurfaceSpec spec;
    int V = 0;
    int E = 0;
    std::vector<FaceRecord> faces;  // ordered by smallest dart id; dartless faces last
    bool binds = false;
    int euler_checksum = 0;  // V - E + sum of face Euler characteristics
    int puncture_total = 0;
    bool isotopic = false;
};

RegionProfile trace_regions(const PairMap& g);
RegionProfile census(const NormalCurve& c, const NormalCurve& d);
bool binds(const RegionProfile& p);

struct Singularity {
    int face = -1;
    bool at_puncture = false;
    int order = 0;
};

struct StratumSignature {
    std::vector<Singularity> singularities;
    bool principal = false;
    int order_sum = 0;
};

StratumSignature stratum_signature(const RegionProfile& p);

// A face is "large" for the principal rule if it is essential, a polygon with >= 8 sides,
// or a once-punctured polygon with >= threshold sides.
bool face_is_principal_witness(const FaceRecord& f, int punctured_threshold);

}  // namespace pclab
