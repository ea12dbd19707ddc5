#include "tt_detail.hpp"

#include <algorithm>

namespace pclab {

using namespace detail;

namespace {

void merge_regions(TrainTrack& t, int a, int b) {
    a = t.find_region(a);
    b = t.find_region(b);
    if (a < 0 || b < 0) fail("InternalError", "merging unlabelled regions");
    if (a == b) {
        t.regions[a].chi -= 1;
        return;
    }
    if (b < a) std::swap(a, b);
    t.regions[a].chi += t.regions[b].chi - 1;
    t.regions[a].punctures += t.regions[b].punctures;
    t.regions[b].parent = a;
}

int add_switch(TrainTrack& t) {
    t.switches.emplace_back();
    return t.num_switches() - 1;
}

int add_branch(TrainTrack& t, int s0, int s1, Weights& w, const Int& weight) {
    TrainTrack::Branch br;
    br.sw = {s0, s1};
    t.branches.push_back(br);
    w.push_back(weight);
    return t.num_branches() - 1;
}

Int side_weight(const std::vector<int>& hs, const Weights& w) {
    Int s = 0;
    for (int h : hs) s += w[h / 2];
    return s;
}

void comb(TrainTrack& t, Weights& w) {
    for (int s = 0; s < t.num_switches(); ++s) {
        auto& N = t.switches[s].side[0];
        auto& P = t.switches[s].side[1];
        if (N.size() >= 2 && P.size() >= 2) {
            int s2 = add_switch(t);
            std::vector<int> moved = t.switches[s].side[1];
            int z = add_branch(t, s, s2, w, side_weight(moved, w));
            for (int h : moved) t.branches[h / 2].sw[h % 2] = s2;
            t.switches[s].side[1] = {2 * z};
            t.switches[s2].side[0] = {2 * z + 1};
            t.switches[s2].side[1] = moved;
        }
    }
    for (int s = 0; s < t.num_switches(); ++s) {
        for (int x = 0; x < 2; ++x) {
            if (t.switches[s].side[x].size() < 3 || t.switches[s].side[1 - x].size() != 1) continue;
            std::vector<int> list = t.switches[s].side[x];
            std::vector<int> moved;
            if (x == 1) moved.assign(list.begin(), list.end() - 1);
            else moved.assign(list.begin() + 1, list.end());
            int s2 = add_switch(t);
            // y runs from s to s2 when folding the P side, from s2 to s otherwise
            int y = x == 1 ? add_branch(t, s, s2, w, side_weight(moved, w)) : add_branch(t, s2, s, w, side_weight(moved, w));
            for (int h : moved) t.branches[h / 2].sw[h % 2] = s2;
            if (x == 1) {
                t.switches[s].side[1] = {2 * y, list.back()};
                t.switches[s2].side[0] = {2 * y + 1};
                t.switches[s2].side[1] = moved;
            } else {
                t.switches[s].side[0] = {list.front(), 2 * y + 1};
                t.switches[s2].side[1] = {2 * y};
                t.switches[s2].side[0] = moved;
            }
            --s;  // revisit: s2 will be handled when reached; s is now trivalent
            break;
        }
    }
}

void merge_bivalent(TrainTrack& t, Weights& w) {
    for (bool changed = true; changed;) {
        changed = false;
        for (int s = 0; s < t.num_switches(); ++s) {
            const auto& sw = t.switches[s];
            if (sw.side[0].size() != 1 || sw.side[1].size() != 1) continue;
            int h1 = sw.side[0][0], h2 = sw.side[1][0];
            int b1 = h1 / 2, b2 = h2 / 2;
            if (b1 == b2) continue;
            if (h1 % 2 == 0) reverse_branch(t, b1);
            if (t.switches[s].side[1][0] % 2 == 1) reverse_branch(t, b2);
            auto& B1 = t.branches[b1];
            const auto& B2 = t.branches[b2];
            if (w[b1] != w[b2]) fail("InternalError", "bivalent switch with unequal weights");
            for (int k = 0; k < 2; ++k) {
                int r1 = B1.region[k], r2 = B2.region[k];
                if (r1 < 0) B1.region[k] = r2;
                else if (r2 >= 0 && t.find_region(r1) != t.find_region(r2))
                    fail("InternalError", "bivalent merge joins different regions");
            }
            B1.word.insert(B1.word.end(), B2.word.begin(), B2.word.end());
            reduce_free(t.surface->tri, B1.word);
            int far = B2.sw[1];
            B1.sw[1] = far;
            replace_half(t, far, 2 * b2 + 1, 2 * b1 + 1);
            t.switches[s].side[0].clear();
            t.switches[s].side[1].clear();
            erase_branch(t, b2);
            w.erase(w.begin() + b2);
            erase_switch(t, s);
            changed = true;
            break;
        }
    }
}

}  // namespace

TrainTrack remove_zero_branches(const TrainTrack& t0, Weights& w) {
    TrainTrack t = t0;
    for (int b = t.num_branches() - 1; b >= 0; --b) {
        if (w[b] != 0) continue;
        auto br = t.branches[b];
        merge_regions(t, br.region[0], br.region[1]);
        int root = t.find_region(br.region[0]);
        erase_branch(t, b);
        w.erase(w.begin() + b);
        std::array<int, 2> ends = br.sw;
        if (ends[0] < ends[1]) std::swap(ends[0], ends[1]);
        for (int k = 0; k < 2; ++k) {
            int s = ends[k];
            if (k == 1 && s == ends[0]) break;
            const auto& sw = t.switches[s];
            if (sw.side[0].empty() && sw.side[1].empty()) {
                t.regions[root].chi += 1;
                erase_switch(t, s);
            } else if (sw.side[0].empty() || sw.side[1].empty()) {
                fail("InvalidWeights", "zero branch removal leaves a one-sided switch");
            }
        }
    }
    return t;
}

TrainTrack make_generic(const TrainTrack& t0, Weights& w) {
    TrainTrack t = remove_zero_branches(t0, w);
    comb(t, w);
    merge_bivalent(t, w);
    repair_regions(t);
    return t;
}

int tighten(TrainTrack& t, int max_moves) {
    const Triangulation& T = t.surface->tri;
    int moves = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (int s = 0; s < t.num_switches() && !changed; ++s) {
            std::vector<int> halves;
            for (int x = 0; x < 2; ++x)
                for (int h : t.switches[s].side[x]) halves.push_back(h);
            std::vector<Word> dep;
            for (int h : halves) dep.push_back(oriented_word(t, h / 2, h % 2));
            // a junction across the switch that backtracks through letter l
            int letter = -1;
            for (int u : t.switches[s].side[0])
                for (int v : t.switches[s].side[1]) {
                    Word du = oriented_word(t, u / 2, u % 2), dv = oriented_word(t, v / 2, v % 2);
                    if (letter < 0 && !du.empty() && !dv.empty() && du[0] == dv[0]) letter = du[0];
                }
            if (letter < 0) continue;
            int gain = 0;
            for (const Word& d : dep) gain += !d.empty() && d[0] == letter ? 1 : -1;
            if (gain <= 0) continue;
            if (++moves > max_moves) fail("ComplexityLimit", "track tightening does not settle");
            Word step{T.partner(letter)};
            for (int h : halves) move_end(t, h / 2, h % 2, step);
            changed = true;
        }
    }
    return moves;
}

bool is_large(const TrainTrack& t, int b) {
    if (b < 0 || b >= t.num_branches()) return false;
    const auto& br = t.branches[b];
    if (br.sw[0] == br.sw[1]) return false;
    for (int e = 0; e < 2; ++e) {
        HalfPos p = locate(t, 2 * b + e);
        const auto& sw = t.switches[p.sw];
        if (sw.side[p.side].size() != 1 || sw.side[1 - p.side].size() != 2) return false;
    }
    return true;
}

SplitOutcome split(const TrainTrack& t0, int e, const CarryingCertificate& guide) {
    if (!is_large(t0, e)) fail("NotLargeBranch", "branch " + std::to_string(e) + " is not large");
    TrainTrack t = t0;
    Weights w = guide.weights;
    int a = t.branches[e].sw[0], b = t.branches[e].sw[1];
    HalfPos pa = locate(t, 2 * e), pb = locate(t, 2 * e + 1);
    // picture frame: e runs west to east from a to b, lists are north to south
    std::vector<int> west = pa.side == 1 ? t.switches[a].side[0] : t.switches[a].side[1];
    if (pa.side == 0) std::reverse(west.begin(), west.end());
    std::vector<int> east = pb.side == 0 ? t.switches[b].side[1] : t.switches[b].side[0];
    if (pb.side == 1) std::reverse(east.begin(), east.end());
    int NW = west[0], SW = west[1], NE = east[0], SE = east[1];
    Int wa = w[NW / 2], wc = w[NE / 2];
    const Word We = t.branches[e].word;

    int RW = left_region(t, SW / 2, 1 - SW % 2);
    int RE = left_region(t, NE / 2, 1 - NE % 2);

    // NE now attaches at a, SW at b
    move_end(t, NE / 2, NE % 2, We);
    move_end(t, SW / 2, SW % 2, inverse_word(t.surface->tri, We));
    t.branches[NE / 2].sw[NE % 2] = a;
    t.branches[SW / 2].sw[SW % 2] = b;

    SplitOutcome out;
    auto& A = t.switches[a].side;
    auto& B = t.switches[b].side;
    if (wa > wc) {
        out.kind = SplitOutcome::Right;
        A[0] = {NW};
        A[1] = {NE, 2 * e};
        B[0] = {2 * e + 1, SW};
        B[1] = {SE};
        w[e] = wa - wc;
    } else if (wa < wc) {
        out.kind = SplitOutcome::Left;
        A[0] = {NW, 2 * e};
        A[1] = {NE};
        B[0] = {SW};
        B[1] = {2 * e + 1, SE};
        w[e] = wc - wa;
    } else {
        out.kind = SplitOutcome::Central;
        A[0] = {NW};
        A[1] = {NE};
        B[0] = {SW};
        B[1] = {SE};
    }
    if (out.kind == SplitOutcome::Central) {
        merge_regions(t, RW, RE);
        erase_branch(t, e);
        w.erase(w.begin() + e);
    } else {
        t.branches[e].region = {-1, -1};
        for (auto& br : t.branches)
            for (int& r : br.region)
                if (r >= 0) r = t.find_region(r);
    }
    t = make_generic(t, w);
    out.track = std::move(t);
    out.guide = CarryingCertificate{guide.curve, w};
    return out;
}

std::vector<SplitStage> splitting_sequence(const TrainTrack& t0, const CarryingCertificate& guide,
                                           bool with_vertex_cycles, int max_stages) {
    Weights w = guide.weights;
    TrainTrack t = make_generic(t0, w);
    CarryingCertificate g{guide.curve, w};
    std::vector<SplitStage> out;
    while (!is_closed_curve_track(t)) {
        if (static_cast<int>(out.size()) >= max_stages) fail("ComplexityLimit", "splitting sequence too long");
        int best = -1;
        for (int b = 0; b < t.num_branches(); ++b)
            if (is_large(t, b) && (best < 0 || g.weights[b] > g.weights[best])) best = b;
        if (best < 0) fail("InternalError", "generic track without a large branch");
        SplitOutcome s = split(t, best, g);
        t = std::move(s.track);
        g = std::move(s.guide);
        SplitStage st;
        st.track = t;
        st.guide = g;
        st.maximal = is_maximal(t);
        if (with_vertex_cycles) st.vertex_cycle = chosen_vertex_cycle(t);
        out.push_back(std::move(st));
    }
    return out;
}

}  // namespace pclab
