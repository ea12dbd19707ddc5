#include "tt_detail.hpp"

#include "pclab/flips.hpp"

#include <algorithm>

namespace pclab {

using namespace detail;

namespace {

std::vector<TrainTrack::Region> regions_of(const PairMap& g) {
    std::vector<TrainTrack::Region> out;
    for (const RegionData& r : g.regions) {
        TrainTrack::Region x;
        x.chi = r.chi;
        x.punctures = static_cast<int>(r.punctures.size());
        out.push_back(x);
    }
    return out;
}

bool eligible(const FaceRecord& f) {
    if (f.kind == FaceKind::Polygon) return f.side_count >= 6;
    if (f.kind == FaceKind::PuncturedPolygon) return f.puncture_count == 1 && f.side_count >= 4;
    return false;
}

}  // namespace

OneSwitchResult one_switch_track(const NormalCurve& c, const NormalCurve& d, const PairMap& g,
                                 const RegionProfile& profile) {
    if (!profile.binds) fail("NotBinding", "the pair does not bind the surface");
    int best = -1;
    for (std::size_t i = 0; i < profile.faces.size(); ++i) {
        if (!eligible(profile.faces[i])) continue;
        if (best < 0 || profile.faces[i].side_count > profile.faces[best].side_count) best = static_cast<int>(i);
    }
    if (best < 0) fail("NoEligibleSide", "no face with at least 6 sides or a punctured face with at least 4");
    int C = profile.faces[best].region;
    // c-side of C: prefer one with a fourgon across, so the merged region is a trigon
    std::vector<int> face_of(g.regions.size(), -1);
    for (std::size_t i = 0; i < profile.faces.size(); ++i) face_of[profile.faces[i].region] = static_cast<int>(i);
    auto fourgon_across = [&](int y) {
        int f = face_of[g.region[g.alpha[y]]];
        return f >= 0 && profile.faces[f].kind == FaceKind::Polygon && profile.faces[f].side_count == 4;
    };
    int x = -1;
    for (int y = 0; y < g.num_darts(); y += 2)
        if (g.region[y] == C && (x < 0 || (fourgon_across(y) && !fourgon_across(x)))) x = y;
    if (x < 0) fail("InternalError", "chosen face has no c-side");
    int Cp = g.region[g.alpha[x]];

    const Triangulation& T = c.tri();
    int V = g.V;
    std::vector<int> fwd(V), pos(V, -1);
    int y = g.opposite(g.alpha[x]);
    for (int j = 0; j < V; ++j) {
        if (pos[y / 4] >= 0) fail("InternalError", "c does not pass through every crossing once");
        fwd[j] = y;
        pos[y / 4] = j;
        y = g.opposite(g.alpha[y]);
    }
    if (fwd[V - 1] != x) fail("InternalError", "c traversal does not end at the arc I");
    std::vector<Word> cpath(V);
    for (int j = 0; j + 1 < V; ++j) {
        cpath[j + 1] = cpath[j];
        cpath[j + 1].insert(cpath[j + 1].end(), g.word[fwd[j]].begin(), g.word[fwd[j]].end());
        reduce_free(T, cpath[j + 1]);
    }

    TrainTrack t;
    t.surface = c.surface;
    t.switches.resize(1);
    t.regions = regions_of(g);
    std::array<std::vector<std::pair<int, int>>, 2> lists;  // (position, half-branch)
    auto side_of = [&](int z) {
        int f = fwd[pos[z / 4]];
        if (z == g.sigma(f)) return 0;
        if (z == g.sigma_inv(f)) return 1;
        fail("InternalError", "d-dart is not adjacent to the forward c-dart");
    };
    for (int z = 1; z < g.num_darts(); z += 2) {
        int za = g.alpha[z];
        if (za < z) continue;
        int b = t.num_branches();
        TrainTrack::Branch br;
        br.sw = {0, 0};
        br.word = cpath[pos[z / 4]];
        br.word.insert(br.word.end(), g.word[z].begin(), g.word[z].end());
        Word back = inverse_word(T, cpath[pos[za / 4]]);
        br.word.insert(br.word.end(), back.begin(), back.end());
        reduce_free(T, br.word);
        br.region = {g.region[za], g.region[z]};
        t.branches.push_back(br);
        lists[side_of(z)].push_back({pos[z / 4], 2 * b});
        lists[side_of(za)].push_back({pos[za / 4], 2 * b + 1});
    }
    for (int s = 0; s < 2; ++s) {
        std::sort(lists[s].begin(), lists[s].end(), [](auto& p, auto& q) { return p.first > q.first; });
        for (auto& [p, h] : lists[s]) t.switches[0].side[s].push_back(h);
    }
    if (C != Cp) {
        t.regions[C].chi += t.regions[Cp].chi - 1;
        t.regions[C].punctures += t.regions[Cp].punctures;
        t.regions[Cp].parent = C;
    } else {
        t.regions[C].chi -= 1;
    }

    OneSwitchResult R;
    Weights w(t.num_branches(), 1);
    R.collapsed_bigons = collapse_bigons(t, {&w});
    R.track = std::move(t);
    R.certificate = CarryingCertificate{d, w};
    R.witness = IntersectionWitness{x, C, Cp};
    return R;
}

OneSwitchResult one_switch_track(const NormalCurve& c, const NormalCurve& d) {
    PairMap g;
    try {
        g = embed_pair(c, d);
    } catch (const Error& e) {
        if (e.code() == "DisjointPair") fail("NotBinding", "disjoint curves do not bind");
        throw;
    }
    RegionProfile p = trace_regions(g);
    return one_switch_track(c, d, g, p);
}

PennerTrack penner_track(const PairMap& g, int type, bool collapse) {
    if (g.V == 0) fail("NotBinding", "the curves are disjoint");
    PennerTrack P;
    TrainTrack& t = P.track;
    t.surface = g.surface;
    t.regions = regions_of(g);
    int V = g.V;
    t.switches.resize(2 * V);
    t.branches.resize(V);
    // group base darts: the cusp sits between x and sigma(x)
    auto group_of = [&](int z) {
        int k = z & 3;
        int grp = type == 0 ? k / 2 : (k == 1 || k == 2 ? 0 : 1);
        return 2 * (z / 4) + grp;
    };
    std::vector<int> edge_branch(g.num_darts(), -1);
    for (int z = 0; z < g.num_darts(); ++z) {
        int za = g.alpha[z];
        if (za < z) continue;
        int b = t.num_branches();
        TrainTrack::Branch br;
        br.sw = {group_of(z), group_of(za)};
        br.word = g.word[z];
        br.region = {g.region[za], g.region[z]};
        t.branches.push_back(br);
        edge_branch[z] = 2 * b;
        edge_branch[za] = 2 * b + 1;
    }
    for (int v = 0; v < V; ++v) {
        int x1 = 4 * v + (type == 0 ? 0 : 1), x2 = g.opposite(x1);
        TrainTrack::Branch& bar = t.branches[v];
        bar.sw = {2 * v, 2 * v + 1};
        bar.region = {g.region[x1], g.region[x2]};
        t.switches[2 * v].side[0] = {2 * v};
        t.switches[2 * v].side[1] = {edge_branch[g.sigma(x1)], edge_branch[x1]};
        t.switches[2 * v + 1].side[0] = {2 * v + 1};
        t.switches[2 * v + 1].side[1] = {edge_branch[g.sigma(x2)], edge_branch[x2]};
    }
    int B = t.num_branches();
    P.weight_a.assign(B, 0);
    P.weight_b.assign(B, 0);
    for (int v = 0; v < V; ++v) P.weight_a[v] = P.weight_b[v] = 1;
    for (int z = 0; z < g.num_darts(); ++z) {
        int b = edge_branch[z] / 2;
        if (g.is_c(z)) P.weight_a[b] = 1;
        else P.weight_b[b] = 1;
    }
    if (collapse) collapse_bigons(t, {&P.weight_a, &P.weight_b});
    else
        for (int z = 0; z < g.num_darts(); ++z) P.dart_branch.push_back(edge_branch[z] / 2);
    return P;
}

int collapse_track_bigons(TrainTrack& t, const std::vector<Weights*>& ws) { return collapse_bigons(t, ws); }

PennerOrbit penner_orbit(const NormalCurve& a, const NormalCurve& b, int n) {
    PairMap g = embed_pair(a, b);
    if (!trace_regions(g).binds) fail("NotBinding", "the pair does not bind the surface");
    NormalCurve phi1 = twist(a, twist(b, a, -1), 1);
    NormalCurve phi2 = twist(a, twist(b, phi1, -1), 1);
    for (int type = 0; type < 2; ++type) {
        PennerTrack P = penner_track(g, type, false);
        for (int ia = 0; ia < 2; ++ia)
            for (int ib = 0; ib < 2; ++ib) {
                // i(a, .) and i(b, .) read off one side of every crossing
                auto sum_at = [&](const Weights& w, int k) {
                    Int s = 0;
                    for (int v = 0; v < g.V; ++v) s += w[P.dart_branch[4 * v + k]];
                    return s;
                };
                auto step = [&](Weights w) {
                    Int x = sum_at(w, 2 * ib);
                    for (std::size_t q = 0; q < w.size(); ++q) w[q] += x * P.weight_b[q];
                    Int y = sum_at(w, 1 + 2 * ia);
                    for (std::size_t q = 0; q < w.size(); ++q) w[q] += y * P.weight_a[q];
                    return w;
                };
                Weights w1 = step(P.weight_a), w2 = step(w1);
                if (!same_curve(reconstruct(P.track, w1), phi1) || !same_curve(reconstruct(P.track, w2), phi2))
                    continue;
                PennerOrbit out;
                out.type = type;
                out.weights.push_back(P.weight_a);
                for (int k = 1; k <= n; ++k) out.weights.push_back(step(out.weights.back()));
                out.track = P.track;
                std::vector<Weights*> ptr;
                for (Weights& w : out.weights) ptr.push_back(&w);
                collapse_bigons(out.track, ptr);
                return out;
            }
    }
    fail("NoCarrier", "no Penner smoothing of the pair carries the orbit");
}

std::optional<Weights> solve_carried(const TrainTrack& t, const NormalCurve& c) {
    if (!is_efficient(t)) return std::nullopt;
    const Triangulation& T = t.surface->tri;
    int B = t.num_branches();
    std::vector<std::vector<Rat>> M;
    for (const auto& sw : t.switches) {
        std::vector<Rat> row(B + 1, 0);
        for (int h : sw.side[0]) row[h / 2] -= 1;
        for (int h : sw.side[1]) row[h / 2] += 1;
        M.push_back(row);
    }
    std::vector<Int> ew = c.edge_weights();
    for (int e = 0; e < T.num_edges(); ++e) {
        std::vector<Rat> row(B + 1, 0);
        for (int b = 0; b < B; ++b)
            for (int s : t.branches[b].word)
                if (T.edge_of(s) == e) row[b] += 1;
        row[B] = ew[e];
        M.push_back(row);
    }
    int rows = static_cast<int>(M.size());
    std::vector<int> piv;
    int r = 0;
    for (int j = 0; j < B && r < rows; ++j) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (M[i][j] != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(M[p], M[r]);
        Rat inv = 1 / M[r][j];
        for (Rat& q : M[r]) q *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || M[i][j] == 0) continue;
            Rat f = M[i][j];
            for (int k = 0; k <= B; ++k) M[i][k] -= f * M[r][k];
        }
        piv.push_back(j);
        ++r;
    }
    for (int i = r; i < rows; ++i)
        if (M[i][B] != 0) return std::nullopt;
    Weights w(B, 0);
    for (int i = 0; i < r; ++i) {
        const Rat& v = M[i][B];
        if (v < 0 || v.get_den() != 1) return std::nullopt;
        w[piv[i]] = v.get_num();
    }
    if (!switch_conditions_hold(t, w)) return std::nullopt;
    return w;
}

}  // namespace pclab
