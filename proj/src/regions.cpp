#include "pclab/regions.hpp"

#include <algorithm>

namespace pclab {

const char* kind_name(FaceKind k) {
    switch (k) {
        case FaceKind::Polygon: return "polygon";
        case FaceKind::PuncturedPolygon: return "punctured_polygon";
        default: return "essential";
    }
}

RegionProfile trace_regions(const PairMap& g) {
    check_pair_map(g);
    RegionProfile p;
    p.spec = g.surface->spec;
    p.V = g.V;
    p.E = 2 * g.V;
    p.isotopic = g.isotopic;
    int R = static_cast<int>(g.regions.size());
    std::vector<int> face_of_region(R, -1);
    std::vector<char> seen(4 * g.V, 0);
    for (int x = 0; x < 4 * g.V; ++x) {
        if (seen[x]) continue;
        std::vector<int> cyc;
        for (int y = x; !seen[y]; y = g.phi(y)) {
            seen[y] = 1;
            cyc.push_back(y);
        }
        int r = g.region[x];
        if (face_of_region[r] < 0) {
            face_of_region[r] = static_cast<int>(p.faces.size());
            FaceRecord f;
            f.region = r;
            p.faces.push_back(f);
        }
        FaceRecord& f = p.faces[face_of_region[r]];
        f.side_count += static_cast<int>(cyc.size());
        f.boundary.push_back(std::move(cyc));
    }
    for (int r = 0; r < R; ++r) {
        if (face_of_region[r] >= 0) continue;
        face_of_region[r] = static_cast<int>(p.faces.size());
        FaceRecord f;
        f.region = r;
        p.faces.push_back(f);
    }
    p.euler_checksum = p.V - p.E;
    for (FaceRecord& f : p.faces) {
        const RegionData& rd = g.regions[f.region];
        f.euler_char = rd.chi;
        f.puncture_vertices = rd.punctures;
        f.puncture_count = static_cast<int>(rd.punctures.size());
        if (f.euler_char == 1 && f.puncture_count == 0)
            f.kind = FaceKind::Polygon;
        else if (f.euler_char == 1 && f.puncture_count == 1)
            f.kind = FaceKind::PuncturedPolygon;
        else
            f.kind = FaceKind::Essential;
        if (f.side_count % 2 != 0) fail("MalformedGraph", "face with an odd number of sides");
        p.euler_checksum += f.euler_char;
        p.puncture_total += f.puncture_count;
    }
    p.binds = binds(p);
    return p;
}

RegionProfile census(const NormalCurve& c, const NormalCurve& d) { return trace_regions(minimal_pair(c, d)); }

bool binds(const RegionProfile& p) {
    if (p.V == 0) return false;
    for (const FaceRecord& f : p.faces)
        if (f.kind == FaceKind::Essential) return false;
    return true;
}

StratumSignature stratum_signature(const RegionProfile& p) {
    if (!binds(p)) fail("NotBinding", "stratum signature needs a binding pair");
    StratumSignature s;
    s.principal = true;
    for (int i = 0; i < static_cast<int>(p.faces.size()); ++i) {
        const FaceRecord& f = p.faces[i];
        int k = f.side_count / 2;
        Singularity sg{i, f.kind == FaceKind::PuncturedPolygon, k - 2};
        s.singularities.push_back(sg);
        s.order_sum += sg.order;
        bool ok = f.kind == FaceKind::Polygon ? (k == 2 || k == 3) : (k == 1);
        s.principal = s.principal && ok;
    }
    return s;
}

bool face_is_principal_witness(const FaceRecord& f, int punctured_threshold) {
    switch (f.kind) {
        case FaceKind::Essential: return true;
        case FaceKind::Polygon: return f.side_count >= 8;
        default: return f.side_count >= punctured_threshold;
    }
}

}  // namespace pclab
