#include "pclab/predicates.hpp"

#include "pclab/flips.hpp"
#include "pclab/train_track.hpp"

#include <algorithm>
#include <deque>

namespace pclab {

EdgeRule EdgeRule::parse(const std::string& name) {
    EdgeRule r;
    if (name == "cg") r.kind = CurveGraph;
    else if (name == "cg0") r.kind = CG0;
    else if (name == "principal") r.kind = Principal;
    else if (name == "principal6") {
        r.kind = Principal;
        r.punctured_threshold = 6;
    } else if (name == "intermediate") r.kind = Intermediate;
    else fail("InvalidRule", "unknown edge rule '" + name + "'");
    return r;
}

std::string EdgeRule::name() const {
    switch (kind) {
        case CurveGraph: return "cg";
        case CG0: return "cg0";
        case Intermediate: return "intermediate";
        default: return punctured_threshold == 4 ? "principal" : "principal" + std::to_string(punctured_threshold);
    }
}

bool rule_holds(const RegionProfile& p, const EdgeRule& rule, std::vector<int>* witness) {
    std::vector<int> w;
    int n = static_cast<int>(p.faces.size());
    switch (rule.kind) {
        case EdgeRule::CurveGraph: break;
        case EdgeRule::CG0:
            for (int i = 0; i < n; ++i)
                if (p.faces[i].kind == FaceKind::Essential) w.push_back(i);
            break;
        case EdgeRule::Principal:
            for (int i = 0; i < n; ++i)
                if (face_is_principal_witness(p.faces[i], rule.punctured_threshold)) w.push_back(i);
            break;
        case EdgeRule::Intermediate: {
            std::vector<int> odd;
            for (int i = 0; i < n; ++i) {
                const FaceRecord& f = p.faces[i];
                if (f.kind == FaceKind::Essential || (f.kind == FaceKind::Polygon && f.side_count >= 10))
                    w.push_back(i);
                if (!(f.kind == FaceKind::Polygon && (f.side_count == 4 || f.side_count == 6))) odd.push_back(i);
            }
            if (w.empty() && odd.size() >= 2) w = odd;
            break;
        }
    }
    bool ok = !w.empty();
    if (witness) *witness = std::move(w);
    return ok;
}

bool disjoint_pair_has_extra_curve(const SurfaceSpec& s) { return 3 * s.genus - 3 + s.punctures >= 3; }

EdgeVerdict edge_verdict(const NormalCurve& c, const NormalCurve& d, const EdgeRule& rule) {
    if (c.surface->spec != d.surface->spec) fail("SurfaceMismatch", "curves live on different surfaces");
    PairMap g = minimal_pair(c, d);
    EdgeVerdict v;
    v.profile = trace_regions(g);
    v.intersection = g.V;
    if (g.V == 0) {
        if (g.isotopic) fail("EqualCurves", "curves are isotopic");
        if (rule.kind == EdgeRule::CurveGraph) {
            v.adjacent = true;
            return v;
        }
        v.adjacent = disjoint_pair_has_extra_curve(c.surface->spec);
        if (v.adjacent) {
            // the piece of most negative Euler characteristic carries the extra curve
            int best = -1, best_chi = 0;
            for (int i = 0; i < static_cast<int>(v.profile.faces.size()); ++i) {
                const FaceRecord& f = v.profile.faces[i];
                int chi = f.euler_char - f.puncture_count;
                if (best < 0 || chi < best_chi) {
                    best = i;
                    best_chi = chi;
                }
            }
            if (best >= 0) v.witness_faces.push_back(best);
        }
        return v;
    }
    v.adjacent = rule_holds(v.profile, rule, &v.witness_faces);
    return v;
}

bool adjacent(const NormalCurve& c, const NormalCurve& d, const EdgeRule& rule) {
    return edge_verdict(c, d, rule).adjacent;
}

std::optional<NormalCurve> face_witness_curve(const PairMap& g, const FaceRecord& f) {
    if (f.kind != FaceKind::Essential) return std::nullopt;
    const SurfacePtr& S = g.surface;
    for (const auto& cyc : f.boundary) {
        Word w;
        for (int x : cyc) w.insert(w.end(), g.word[x].begin(), g.word[x].end());
        NormalCurve e = curve_from_word(S, std::move(w));
        if (e.total_weight() == 0 || is_vertex_link(e)) continue;
        if (split_components(e).size() != 1) continue;
        return e;
    }
    return std::nullopt;
}

CgDistance cg_distance_class(const NormalCurve& c, const NormalCurve& d) {
    CgDistance r;
    if (same_curve(c, d)) return r;
    PairMap g = minimal_pair(c, d);
    if (g.V == 0) {
        r.value = g.isotopic ? 0 : 1;
        return r;
    }
    RegionProfile p = trace_regions(g);
    if (p.binds) {
        r.value = 3;
        return r;
    }
    r.value = 2;
    for (const FaceRecord& f : p.faces)
        if (auto e = face_witness_curve(g, f)) {
            r.witness = *e;
            break;
        }
    return r;
}

int pc_distance_class(const NormalCurve& c, const NormalCurve& d, const EdgeRule& rule) {
    if (same_curve(c, d)) return 0;
    return adjacent(c, d, rule) ? 1 : 2;
}

namespace {

// Predicate adjacency when the explicit pair is affordable; nullopt otherwise.
std::optional<bool> try_adjacent(const NormalCurve& x, const NormalCurve& y, const EdgeRule& rule) {
    if (!explicit_feasible(x, y)) return std::nullopt;
    try {
        return adjacent(x, y, rule);
    } catch (const Error& e) {
        if (e.code() == "EqualCurves") return std::nullopt;
        throw;
    }
}

}  // namespace

PcBound pc_upper_bound(const NormalCurve& c, const NormalCurve& d, const EdgeRule& rule, int budget) {
    PcBound out;
    if (same_curve(c, d)) {
        out.bound = 0;
        out.chain = {c};
        return out;
    }
    if (auto a = try_adjacent(c, d, rule); a && *a) {
        out.bound = 1;
        out.chain = {c, d};
        out.links = {ChainLink{}};
        return out;
    }
    // nodes: 0 = c, 1 = d, then candidates
    std::vector<NormalCurve> nodes{c, d};
    std::vector<std::vector<std::pair<int, ChainLink>>> adj(2);
    auto node_of = [&](const NormalCurve& x) {
        for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
            if (nodes[i].same_coordinates(x)) return i;
        nodes.push_back(x);
        adj.emplace_back();
        return static_cast<int>(nodes.size()) - 1;
    };
    auto link = [&](int i, int j, ChainLink l) {
        if (i == j) return;
        adj[i].push_back({j, l});
        adj[j].push_back({i, l});
    };
    bool binding = false;
    if (explicit_feasible(c, d)) {
        PairMap g = minimal_pair(c, d);
        binding = g.V > 0 && trace_regions(g).binds;
    }
    // (a) carrier edges from splitting sequences of the one-switch tracks in both directions
    int stage_id = 0;
    if (binding) {
        for (int dir = 0; dir < 2; ++dir) {
            const NormalCurve& x = dir == 0 ? c : d;
            const NormalCurve& y = dir == 0 ? d : c;
            int target = dir == 0 ? 1 : 0;
            try {
                OneSwitchResult R = one_switch_track(x, y);
                std::vector<std::pair<TrainTrack, NormalCurve>> stages;
                stages.push_back({R.track, chosen_vertex_cycle(R.track)});
                for (auto& st : splitting_sequence(R.track, R.certificate, true, budget))
                    stages.push_back({std::move(st.track), std::move(st.vertex_cycle)});
                for (auto& [t, v] : stages) {
                    int id = stage_id++;
                    if (static_cast<int>(nodes.size()) >= budget) break;
                    if (is_maximal(t)) continue;
                    int k = node_of(v);
                    link(k, target, ChainLink{ChainLink::Carrier, id});
                }
            } catch (const Error& e) {
                if (e.code() != "ComplexityLimit") throw;
            }
        }
    }
    // (b) short curves as intermediate candidates
    for (const NormalCurve& s : short_curves(c.surface)) {
        if (static_cast<int>(nodes.size()) >= budget) break;
        node_of(s);
    }
    out.candidates = static_cast<int>(nodes.size()) - 2;
    // predicate edges from both endpoints to every candidate
    for (int k = 2; k < static_cast<int>(nodes.size()); ++k)
        for (int end = 0; end < 2; ++end)
            if (auto a = try_adjacent(nodes[end], nodes[k], rule); a && *a) link(end, k, ChainLink{});
    // breadth-first search from c
    int n = static_cast<int>(nodes.size());
    std::vector<int> par(n, -1);
    std::vector<ChainLink> via(n);
    std::vector<char> seen(n, 0);
    std::deque<int> q{0};
    seen[0] = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (auto& [v, l] : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                par[v] = u;
                via[v] = l;
                q.push_back(v);
            }
    }
    if (!seen[1]) return out;
    std::vector<int> path;
    for (int v = 1; v >= 0; v = par[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    for (std::size_t i = 0; i < path.size(); ++i) {
        out.chain.push_back(nodes[path[i]]);
        if (i > 0) out.links.push_back(via[path[i]]);
    }
    out.bound = static_cast<int>(path.size()) - 1;
    return out;
}

}  // namespace pclab
