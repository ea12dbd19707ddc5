#include "tt_detail.hpp"

#include "pclab/flips.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace pclab {

int TrainTrack::find_region(int r) const {
    while (r >= 0 && regions[r].parent >= 0) r = regions[r].parent;
    return r;
}

bool TrainTrack::generic() const {
    for (const Switch& s : switches) {
        std::size_t a = s.side[0].size(), b = s.side[1].size();
        if (!((a == 1 && b == 2) || (a == 2 && b == 1))) return false;
    }
    return true;
}

HalfPos locate(const TrainTrack& t, int hb) {
    int s = t.branches[hb / 2].sw[hb % 2];
    if (s < 0 || s >= t.num_switches()) fail("MalformedTrack", "half-branch without a switch");
    for (int x = 0; x < 2; ++x) {
        const auto& v = t.switches[s].side[x];
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] == hb) return HalfPos{s, x, static_cast<int>(i)};
    }
    fail("MalformedTrack", "half-branch missing from its switch");
}

bool is_closed_curve_track(const TrainTrack& t) {
    return t.num_branches() == 1 && t.num_switches() == 1 && t.switches[0].side[0].size() == 1 &&
           t.switches[0].side[1].size() == 1;
}

namespace detail {

Step boundary_next(const TrainTrack& t, int b, int dir) {
    HalfPos p = locate(t, 2 * b + (1 - dir));
    const auto& sw = t.switches[p.sw];
    const auto& N = sw.side[0];
    const auto& P = sw.side[1];
    int h;
    bool cusp;
    if (p.side == 1) {
        if (p.idx + 1 < static_cast<int>(P.size())) {
            h = P[p.idx + 1];
            cusp = true;
        } else {
            h = N.back();
            cusp = false;
        }
    } else {
        if (p.idx > 0) {
            h = N[p.idx - 1];
            cusp = true;
        } else {
            h = P.front();
            cusp = false;
        }
    }
    return Step{h / 2, h % 2, cusp};
}

int left_region(const TrainTrack& t, int b, int dir) {
    return t.find_region(t.branches[b].region[dir == 0 ? 0 : 1]);
}

Cycles boundary_cycles(const TrainTrack& t) {
    Cycles C;
    int n = 2 * t.num_branches();
    C.cycle_of.assign(n, -1);
    for (int s0 = 0; s0 < n; ++s0) {
        if (C.cycle_of[s0] >= 0) continue;
        int id = static_cast<int>(C.cycles.size());
        C.cycles.emplace_back();
        int b = s0 / 2, dir = s0 % 2;
        for (int guard = 0;; ++guard) {
            if (guard > n) fail("MalformedTrack", "boundary cycle does not close");
            C.cycle_of[2 * b + dir] = id;
            Step st = boundary_next(t, b, dir);
            C.cycles[id].push_back(Step{b, dir, st.cusp});
            b = st.b;
            dir = st.dir;
            if (2 * b + dir == s0) break;
            if (C.cycle_of[2 * b + dir] >= 0) fail("MalformedTrack", "boundary cycles overlap");
        }
    }
    return C;
}

Word oriented_word(const TrainTrack& t, int b, int dir) {
    if (dir == 0) return t.branches[b].word;
    return inverse_word(t.surface->tri, t.branches[b].word);
}

void erase_branch(TrainTrack& t, int r) {
    for (auto& sw : t.switches)
        for (auto& side : sw.side) {
            std::vector<int> kept;
            for (int h : side) {
                if (h / 2 == r) continue;
                kept.push_back(h / 2 > r ? h - 2 : h);
            }
            side = kept;
        }
    t.branches.erase(t.branches.begin() + r);
}

void erase_switch(TrainTrack& t, int s) {
    t.switches.erase(t.switches.begin() + s);
    for (auto& b : t.branches)
        for (int& x : b.sw)
            if (x > s) --x;
}

void replace_half(TrainTrack& t, int s, int from, int to) {
    for (auto& side : t.switches[s].side)
        for (int& h : side)
            if (h == from) h = to;
}

void reverse_branch(TrainTrack& t, int b) {
    auto& br = t.branches[b];
    int s0 = br.sw[0], s1 = br.sw[1];
    for (int s : {s0, s1}) {
        for (auto& side : t.switches[s].side)
            for (int& h : side) {
                if (h == 2 * b) h = 2 * b + 1;
                else if (h == 2 * b + 1) h = 2 * b;
            }
        if (s0 == s1) break;
    }
    std::swap(br.sw[0], br.sw[1]);
    br.word = inverse_word(t.surface->tri, br.word);
    std::swap(br.region[0], br.region[1]);
}

// Moves end e of branch b to a new location; path runs from the new location to the old one.
void move_end(TrainTrack& t, int b, int e, const Word& path) {
    const Triangulation& T = t.surface->tri;
    Word& w = t.branches[b].word;
    if (e == 0) {
        Word n = path;
        n.insert(n.end(), w.begin(), w.end());
        w = n;
    } else {
        Word inv = inverse_word(T, path);
        w.insert(w.end(), inv.begin(), inv.end());
    }
    reduce_free(T, w);
}

namespace {

struct Oriented {
    int b, dir;
};

int left_slot(int dir) { return dir == 0 ? 0 : 1; }

// Folds F onto the initial segment of G; both leave the same switch with the bigon between them.
void fold(TrainTrack& t, const std::vector<Weights*>& ws, Oriented F, Oriented G, bool bigon_left_of_F) {
    int f = F.b, g = G.b;
    HalfPos arr = locate(t, 2 * f + (1 - F.dir));
    int sF = arr.sw;
    int f_slot = bigon_left_of_F ? left_slot(F.dir) : 1 - left_slot(F.dir);
    int g_outer = bigon_left_of_F ? left_slot(G.dir) : 1 - left_slot(G.dir);
    t.branches[f].region[f_slot] = t.branches[g].region[g_outer];
    Word wf = oriented_word(t, f, F.dir);
    move_end(t, g, G.dir, inverse_word(t.surface->tri, wf));
    int hG = 2 * g + G.dir;
    int p = t.branches[g].sw[G.dir];
    for (auto& side : t.switches[p].side) side.erase(std::remove(side.begin(), side.end(), hG), side.end());
    t.branches[g].sw[G.dir] = sF;
    auto& dep = t.switches[sF].side[1 - arr.side];
    bool front = (arr.side == 0) == bigon_left_of_F;
    if (front) dep.insert(dep.begin(), hG);
    else dep.push_back(hG);
    for (Weights* w : ws) (*w)[f] += (*w)[g];
}

}  // namespace

int collapse_bigons(TrainTrack& t, const std::vector<Weights*>& ws) {
    int collapsed = 0;
    for (int guard = 0;; ++guard) {
        if (guard > 100000) fail("InternalError", "bigon collapse does not terminate");
        Cycles C = boundary_cycles(t);
        std::vector<int> cycles_per_region(t.regions.size(), 0);
        for (const auto& cyc : C.cycles) {
            int r = left_region(t, cyc[0].b, cyc[0].dir);
            if (r >= 0) ++cycles_per_region[r];
        }
        const std::vector<Step>* found = nullptr;
        for (const auto& cyc : C.cycles) {
            int cusps = 0;
            for (const Step& s : cyc) cusps += s.cusp ? 1 : 0;
            if (cusps != 2) continue;
            int r = left_region(t, cyc[0].b, cyc[0].dir);
            if (r < 0 || cycles_per_region[r] != 1) continue;
            if (t.regions[r].chi != 1 || t.regions[r].punctures != 0) continue;
            found = &cyc;
            break;
        }
        if (!found) return collapsed;
        int L = static_cast<int>(found->size());
        int start = 0;
        while (!(*found)[start].cusp) ++start;
        std::vector<Step> seq;
        for (int i = 1; i <= L; ++i) seq.push_back((*found)[(start + i) % L]);
        int m = 0;
        while (!seq[m].cusp) ++m;
        ++m;
        int n = L - m;
        Oriented X{seq[0].b, seq[0].dir};
        Oriented Yb{seq[L - 1].b, 1 - seq[L - 1].dir};
        if (X.b == Yb.b) fail("MalformedTrack", "bigon bounded twice by one branch");
        if (m == 1 && n == 1) {
            // both sides are single branches: identify them
            Step s1 = seq[0], s2 = seq[1];
            if (s2.b < s1.b) std::swap(s1, s2);
            int bigon = left_region(t, s1.b, s1.dir);
            int outer = t.branches[s2.b].region[1 - left_slot(s2.dir)];
            t.branches[s1.b].region[left_slot(s1.dir)] = outer;
            t.regions[bigon].dead = true;
            for (Weights* w : ws) {
                (*w)[s1.b] += (*w)[s2.b];
                w->erase(w->begin() + s2.b);
            }
            erase_branch(t, s2.b);
            ++collapsed;
        } else if (n >= 2) {
            fold(t, ws, Yb, X, false);
        } else {
            fold(t, ws, X, Yb, true);
        }
    }
}

void repair_regions(TrainTrack& t) {
    Cycles C = boundary_cycles(t);
    for (const auto& cyc : C.cycles) {
        int label = -1;
        for (const Step& s : cyc) {
            int raw = t.branches[s.b].region[s.dir == 0 ? 0 : 1];
            if (raw < 0) continue;
            int r = t.find_region(raw);
            if (label >= 0 && r != label) fail("InternalError", "complementary regions merged unexpectedly");
            label = r;
        }
        if (label < 0) fail("InternalError", "complementary region lost its label");
        for (const Step& s : cyc) {
            int& slot = t.branches[s.b].region[s.dir == 0 ? 0 : 1];
            if (slot < 0) slot = label;
        }
    }
}

}  // namespace detail

namespace {

using namespace detail;

bool forbidden(const TrackRegion& r) {
    if (r.chi == 1 && r.punctures == 0 && r.cusps <= 2) return true;
    if (r.chi == 1 && r.punctures == 1 && r.cusps == 0) return true;
    if (r.chi == 0 && r.punctures == 0 && r.cusps == 0 && r.cycles == 2) return true;
    return false;
}

// Oriented continuations after traversing (b, dir).
std::vector<int> continuations(const TrainTrack& t, int b, int dir) {
    HalfPos p = locate(t, 2 * b + (1 - dir));
    std::vector<int> out;
    for (int h : t.switches[p.sw].side[1 - p.side]) out.push_back(h);
    return out;  // half-branch h means state (h/2, h%2)
}

}  // namespace

std::vector<TrackRegion> track_census(const TrainTrack& t) {
    Cycles C = boundary_cycles(t);
    std::map<int, TrackRegion> by_id;
    for (const auto& cyc : C.cycles) {
        int r = left_region(t, cyc[0].b, cyc[0].dir);
        TrackRegion& R = by_id[r];
        R.id = r;
        if (r >= 0) {
            R.chi = t.regions[r].chi;
            R.punctures = t.regions[r].punctures;
        }
        R.cycles += 1;
        for (const Step& s : cyc) R.cusps += s.cusp ? 1 : 0;
    }
    std::vector<TrackRegion> out;
    for (auto& [id, r] : by_id) out.push_back(r);
    return out;
}

bool is_maximal(const TrainTrack& t) {
    for (const TrackRegion& r : track_census(t)) {
        bool trigon = r.chi == 1 && r.punctures == 0 && r.cusps == 3 && r.cycles == 1;
        bool monogon = r.chi == 1 && r.punctures == 1 && r.cusps == 1 && r.cycles == 1;
        if (!trigon && !monogon) return false;
    }
    return true;
}

std::vector<std::string> track_violations(const TrainTrack& t) {
    std::vector<std::string> out;
    int B = t.num_branches();
    for (int s = 0; s < t.num_switches(); ++s) {
        const auto& sw = t.switches[s];
        if (sw.side[0].empty() || sw.side[1].empty()) out.push_back("switch " + std::to_string(s) + " has an empty side");
        for (int x = 0; x < 2; ++x)
            for (int h : sw.side[x])
                if (h < 0 || h >= 2 * B || t.branches[h / 2].sw[h % 2] != s)
                    out.push_back("switch " + std::to_string(s) + " lists a foreign half-branch");
    }
    if (!out.empty()) return out;
    for (int b = 0; b < B; ++b) {
        for (int e = 0; e < 2; ++e) {
            try {
                locate(t, 2 * b + e);
            } catch (const Error&) {
                out.push_back("branch " + std::to_string(b) + " end " + std::to_string(e) + " is detached");
            }
        }
    }
    if (!out.empty()) return out;
    Cycles C;
    try {
        C = boundary_cycles(t);
    } catch (const Error& e) {
        out.push_back(e.what());
        return out;
    }
    for (const auto& cyc : C.cycles) {
        int r = left_region(t, cyc[0].b, cyc[0].dir);
        for (const Step& s : cyc)
            if (left_region(t, s.b, s.dir) != r) out.push_back("region labels disagree along a boundary cycle");
        if (r < 0) out.push_back("unlabelled complementary region");
    }
    if (!out.empty()) return out;
    auto census = track_census(t);
    int sum_chi = 0;
    for (const TrackRegion& r : census) {
        sum_chi += r.chi;
        if (forbidden(r) && !is_closed_curve_track(t))
            out.push_back("forbidden complementary region (chi " + std::to_string(r.chi) + ", punctures " +
                          std::to_string(r.punctures) + ", cusps " + std::to_string(r.cusps) + ")");
    }
    if (t.num_switches() - B + sum_chi != t.surface->spec.euler())
        out.push_back("Euler characteristic of the track complement is inconsistent");
    return out;
}

bool switch_conditions_hold(const TrainTrack& t, const std::vector<Rat>& w) {
    if (static_cast<int>(w.size()) != t.num_branches()) return false;
    for (const Rat& x : w)
        if (x < 0) return false;
    for (const auto& sw : t.switches) {
        Rat a = 0, b = 0;
        for (int h : sw.side[0]) a += w[h / 2];
        for (int h : sw.side[1]) b += w[h / 2];
        if (a != b) return false;
    }
    return true;
}

bool switch_conditions_hold(const TrainTrack& t, const Weights& w) {
    std::vector<Rat> r(w.begin(), w.end());
    return switch_conditions_hold(t, r);
}

bool is_efficient(const TrainTrack& t) {
    const Triangulation& T = t.surface->tri;
    int n = 2 * t.num_branches();
    std::vector<Word> ow(n);
    for (int s = 0; s < n; ++s) {
        ow[s] = oriented_word(t, s / 2, s % 2);
        Word r = ow[s];
        reduce_free(T, r);
        if (r.size() != ow[s].size()) return false;
    }
    // first letters reachable after state s through empty branches
    std::vector<std::set<int>> first(n);
    std::vector<int> mark(n, 0);  // 0 new, 1 active, 2 done
    bool empty_loop = false;
    std::function<void(int)> visit = [&](int s) {
        mark[s] = 1;
        for (int h : continuations(t, s / 2, s % 2)) {
            if (!ow[h].empty()) {
                first[s].insert(ow[h].front());
                continue;
            }
            if (mark[h] == 1) {
                empty_loop = true;
                continue;
            }
            if (mark[h] == 0) visit(h);
            first[s].insert(first[h].begin(), first[h].end());
        }
        mark[s] = 2;
    };
    for (int s = 0; s < n; ++s)
        if (mark[s] == 0) visit(s);
    if (empty_loop) return false;
    for (int s = 0; s < n; ++s) {
        if (ow[s].empty()) continue;
        int cancel = T.partner(ow[s].back());
        if (first[s].count(cancel)) return false;
    }
    return true;
}

namespace {

long total_long(const Weights& w) {
    Int s = 0;
    for (const Int& x : w) s += x;
    return s.fits_slong_p() ? s.get_si() : -1;
}

NormalCurve reconstruct_traced(const TrainTrack& t, const Weights& wz) {
    int B = t.num_branches();
    std::vector<long> w(B);
    for (int b = 0; b < B; ++b) w[b] = wz[b].get_si();
    // offsets of half-branches within their side, left to right
    std::vector<long> offset(2 * B, 0);
    for (const auto& sw : t.switches)
        for (int x = 0; x < 2; ++x) {
            long o = 0;
            for (int h : sw.side[x]) {
                offset[h] = o;
                o += w[h / 2];
            }
        }
    std::vector<long> base(B + 1, 0);
    for (int b = 0; b < B; ++b) base[b + 1] = base[b] + w[b];
    std::vector<char> seen(base[B], 0);
    std::vector<Int> corners(t.surface->tri.num_sides(), 0);
    const Triangulation& T = t.surface->tri;
    auto local_pos = [&](int side, int e, long k, long wb) {
        if (side == 1) return e == 0 ? k : wb - 1 - k;
        return e == 0 ? wb - 1 - k : k;
    };
    for (int b0 = 0; b0 < B; ++b0) {
        for (long k0 = 0; k0 < w[b0]; ++k0) {
            if (seen[base[b0] + k0]) continue;
            Word word;
            int b = b0, dir = 0;
            long k = k0;
            for (;;) {
                if (seen[base[b] + k]) break;
                seen[base[b] + k] = 1;
                Word ow = oriented_word(t, b, dir);
                word.insert(word.end(), ow.begin(), ow.end());
                int h = 2 * b + (1 - dir);
                HalfPos p = locate(t, h);
                long g = offset[h] + local_pos(p.side, h % 2, k, w[b]);
                const auto& other = t.switches[p.sw].side[1 - p.side];
                int nh = -1;
                for (int x : other)
                    if (offset[x] <= g && g < offset[x] + w[x / 2]) nh = x;
                if (nh < 0) fail("InvalidWeights", "switch condition fails while tracing strands");
                long pos = g - offset[nh];
                int nb = nh / 2, ne = nh % 2;
                long nk = (1 - p.side) == 1 ? (ne == 0 ? pos : w[nb] - 1 - pos) : (ne == 0 ? w[nb] - 1 - pos : pos);
                b = nb;
                dir = ne;
                k = nk;
            }
            reduce_cyclic(T, word);
            add_word_corners(T, word, corners);
        }
    }
    return NormalCurve(t.surface, std::move(corners));
}

struct Interval {
    Int lo, hi;  // [lo, hi)
};

// Strand counts between consecutive nonempty oriented branches, passing through empty ones.
std::map<std::pair<int, int>, Int> junction_flows(const TrainTrack& t, const Weights& w,
                                                  const std::vector<Word>& ow) {
    int B = t.num_branches();
    std::vector<Int> offset(2 * B, 0);
    for (const auto& sw : t.switches)
        for (int x = 0; x < 2; ++x) {
            Int o = 0;
            for (int h : sw.side[x]) {
                offset[h] = o;
                o += w[h / 2];
            }
        }
    std::map<std::pair<int, int>, Int> flow;
    // positions of the strands of half-branch h in side coordinates, given strand-index interval
    auto to_side = [&](int h, int side, const Interval& k) {
        const Int& wb = w[h / 2];
        bool reversed = (side == 1) != (h % 2 == 0);
        if (!reversed) return Interval{offset[h] + k.lo, offset[h] + k.hi};
        return Interval{offset[h] + wb - k.hi, offset[h] + wb - k.lo};
    };
    auto to_strand = [&](int h, int side, const Interval& g) {
        const Int& wb = w[h / 2];
        bool reversed = (side == 1) != (h % 2 == 0);
        Interval loc{g.lo - offset[h], g.hi - offset[h]};
        if (!reversed) return loc;
        return Interval{wb - loc.hi, wb - loc.lo};
    };
    std::function<void(int, int, Interval, int)> push = [&](int src, int h_arr, Interval k, int depth) {
        if (depth > 2 * B + 2) fail("MalformedTrack", "closed train path through empty branches");
        HalfPos p = locate(t, h_arr);
        Interval g = to_side(h_arr, p.side, k);
        for (int h2 : t.switches[p.sw].side[1 - p.side]) {
            Interval r{offset[h2], offset[h2] + w[h2 / 2]};
            Interval j{g.lo > r.lo ? g.lo : r.lo, g.hi < r.hi ? g.hi : r.hi};
            if (j.hi <= j.lo) continue;
            int y = h2;  // state (h2/2, h2%2)
            if (!ow[y].empty()) {
                flow[{src, y}] += j.hi - j.lo;
                continue;
            }
            Interval ks = to_strand(h2, 1 - p.side, j);
            push(src, 2 * (h2 / 2) + (1 - h2 % 2), ks, depth + 1);
        }
    };
    for (int x = 0; x < 2 * B; ++x) {
        if (ow[x].empty() || w[x / 2] == 0) continue;
        push(x, 2 * (x / 2) + (1 - x % 2), Interval{0, w[x / 2]}, 0);
    }
    return flow;
}

int cancellation(const Triangulation& T, const Word& x, const Word& y) {
    int c = 0;
    int n = static_cast<int>(std::min(x.size(), y.size()));
    while (c < n && T.partner(x[x.size() - 1 - c]) == y[c]) ++c;
    return c;
}

// Edge weights of the carried multicurve from linear counts corrected by junction cancellations.
}  // namespace

NormalCurve reconstruct_by_counts(const TrainTrack& t, const Weights& w) {
    const Triangulation& T = t.surface->tri;
    int B = t.num_branches();
    std::vector<Word> ow(2 * B);
    for (int s = 0; s < 2 * B; ++s) ow[s] = oriented_word(t, s / 2, s % 2);
    std::vector<Int> ew(T.num_edges(), 0);
    for (int b = 0; b < B; ++b)
        for (int s : t.branches[b].word) ew[T.edge_of(s)] += w[b];
    auto flow = junction_flows(t, w, ow);
    std::vector<int> cin(2 * B, 0), cout(2 * B, 0);
    for (const auto& [xy, n] : flow) {
        auto [x, y] = xy;
        // each junction is seen once per strand orientation
        if (std::make_pair(y ^ 1, x ^ 1) < xy) continue;
        int c = cancellation(T, ow[x], ow[y]);
        if (c == 0) continue;
        cout[x] = std::max(cout[x], c);
        cin[y] = std::max(cin[y], c);
        cout[y ^ 1] = std::max(cout[y ^ 1], c);
        cin[x ^ 1] = std::max(cin[x ^ 1], c);
        for (int i = 0; i < c; ++i) {
            ew[T.edge_of(ow[x][ow[x].size() - 1 - i])] -= n;
            ew[T.edge_of(ow[y][i])] -= n;
        }
    }
    for (int s = 0; s < 2 * B; ++s)
        if (!ow[s].empty() && cin[s] + cout[s] >= static_cast<int>(ow[s].size()))
            fail("ComplexityLimit", "junction cancellations cascade through a branch");
    return NormalCurve(t.surface, corners_from_edges(T, ew));
}

NormalCurve reconstruct(const TrainTrack& t, const Weights& w) {
    if (!switch_conditions_hold(t, w)) fail("InvalidWeights", "weights violate the switch conditions");
    long tot = total_long(w);
    if (tot >= 0 && tot <= 400000) return reconstruct_traced(t, w);
    return reconstruct_by_counts(t, w);
}

bool verify_certificate(const TrainTrack& t, const CarryingCertificate& cert) {
    if (!switch_conditions_hold(t, cert.weights)) return false;
    NormalCurve r = reconstruct(t, cert.weights);
    return same_curve(r, cert.curve);
}

}  // namespace pclab
