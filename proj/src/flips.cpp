#include "pclab/flips.hpp"

#include "pclab/pair_map.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>

namespace pclab {

FlipStep flip_step(const Triangulation& T, int e) {
    auto [s1, s2] = T.sides_of_edge(e);
    int t1 = s1 / 3, k1 = s1 % 3, t2 = s2 / 3, k2 = s2 % 3;
    return FlipStep{e, T.triangle(t1)[(k1 + 1) % 3].edge, T.triangle(t1)[(k1 + 2) % 3].edge,
                    T.triangle(t2)[(k2 + 1) % 3].edge, T.triangle(t2)[(k2 + 2) % 3].edge};
}

namespace {

struct Core {
    int e, f, g, h, t1, t2;
};

std::optional<Core> find_core(const Triangulation& T, const std::vector<Int>& w) {
    std::vector<int> nz;
    for (int x = 0; x < T.num_edges(); ++x) {
        if (w[x] == 0) continue;
        if (w[x] != 1 || nz.size() >= 2) return std::nullopt;
        nz.push_back(x);
    }
    if (nz.size() != 2) return std::nullopt;
    int e = nz[0], f = nz[1];
    auto [sa, sb] = T.sides_of_edge(e);
    int t1 = sa / 3, t2 = sb / 3;
    if (t1 == t2) return std::nullopt;
    auto third = [&](int t) {
        int other = -1;
        bool hasf = false;
        for (const Side& s : T.triangle(t)) {
            if (s.edge == f) hasf = true;
            else if (s.edge != e) other = s.edge;
        }
        return hasf ? other : -2;
    };
    int g = third(t1), h = third(t2);
    if (g < 0 || h < 0 || g == h) return std::nullopt;
    return Core{e, f, g, h, t1, t2};
}

Int total(const std::vector<Int>& w) {
    Int s = 0;
    for (const Int& x : w) s += x;
    return s;
}

// Depth-limited search for a flip sequence that lowers the total weight.
bool improve(const Triangulation& T, const std::vector<Int>& w, const Int& target, int depth, int last,
             std::vector<int>& path) {
    if (depth == 0) return false;
    for (int e = 0; e < T.num_edges(); ++e) {
        if (e == last || !T.flippable(e)) continue;
        std::vector<Int> w2 = w;
        flip_step(T, e).apply(w2);
        Triangulation T2 = T.flipped(e);
        path.push_back(e);
        if (total(w2) < target || find_core(T2, w2)) return true;
        if (improve(T2, w2, target, depth - 1, e, path)) return true;
        path.pop_back();
    }
    return false;
}

std::array<Side, 3> canonical_rotation(std::array<Side, 3> t) {
    auto key = [](const Side& s) { return std::make_pair(s.edge, s.fwd); };
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (key(t[i]) < key(t[best])) best = i;
    return {t[best], t[(best + 1) % 3], t[(best + 2) % 3]};
}

std::vector<std::array<Side, 3>> canonical_triangles(const Triangulation& T, const std::vector<int>& target,
                                                     const std::vector<char>& rev) {
    std::vector<std::array<Side, 3>> out;
    for (auto t : T.triangles()) {
        for (Side& s : t) {
            s.fwd = s.fwd != static_cast<bool>(rev[s.edge]);
            s.edge = target[s.edge];
        }
        out.push_back(canonical_rotation(t));
    }
    auto key = [](const std::array<Side, 3>& t) {
        return std::make_tuple(t[0].edge, t[0].fwd, t[1].edge, t[1].fwd, t[2].edge, t[2].fwd);
    };
    std::sort(out.begin(), out.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
    return out;
}

// Relabelling of core_tri.flipped(r) back onto core_tri that moves only the rungs.
std::vector<int> rung_relabel(const Triangulation& Tc, int e, int f, int r) {
    Triangulation Tf = Tc.flipped(r);
    int E = Tc.num_edges();
    std::vector<int> id(E);
    for (int x = 0; x < E; ++x) id[x] = x;
    std::vector<char> none(E, 0);
    auto goal = canonical_triangles(Tc, id, none);
    for (int swap = 1; swap >= 0; --swap) {
        for (int re = 0; re < 2; ++re) {
            for (int rf = 0; rf < 2; ++rf) {
                std::vector<int> tgt = id;
                std::vector<char> rev(E, 0);
                if (swap) {
                    tgt[e] = f;
                    tgt[f] = e;
                }
                rev[e] = static_cast<char>(re);
                rev[f] = static_cast<char>(rf);
                if (canonical_triangles(Tf, tgt, rev) == goal) return tgt;
            }
        }
    }
    fail("InternalError", "no rung relabelling found for the twist");
}

}  // namespace

std::vector<Int> TwistPlan::twist_weights(std::vector<Int> w, long n) const {
    for (const FlipStep& s : to_core) s.apply(w);
    const FlipStep& fs = n >= 0 ? pos_flip : neg_flip;
    const std::vector<int>& perm = n >= 0 ? pos_perm : neg_perm;
    long reps = n >= 0 ? n : -n;
    std::vector<Int> tmp(w.size());
    for (long i = 0; i < reps; ++i) {
        fs.apply(w);
        for (std::size_t x = 0; x < w.size(); ++x) tmp[perm[x]] = w[x];
        w.swap(tmp);
    }
    for (auto it = to_core.rbegin(); it != to_core.rend(); ++it) it->apply(w);
    return w;
}

Int TwistPlan::intersection(std::vector<Int> w) const {
    for (const FlipStep& s : to_core) s.apply(w);
    auto corner = [&](int x, int y, int z) -> Int { return (w[x] + w[y] - w[z]) / 2; };
    auto min3 = [](Int a, const Int& b, const Int& c) {
        if (b < a) a = b;
        if (c < a) a = c;
        return a;
    };
    Int Rg = min3(corner(e, g, f), corner(e, f, h), corner(f, g, e));
    Int Rh = min3(corner(e, h, f), corner(e, f, g), corner(f, h, e));
    Int ig = w[g] - 2 * Rg, ih = w[h] - 2 * Rh;
    if (ig != ih || ig < 0) fail("InternalError", "annulus intersection formula inconsistent");
    return ig;
}

namespace {

TwistPlan make_plan(const NormalCurve& a) {
    const Triangulation& T0 = a.tri();
    TwistPlan P;
    P.curve = a;
    Triangulation T = T0;
    std::vector<Int> w = a.edge_weights();
    std::optional<Core> core;
    for (int guard = 0; !(core = find_core(T, w)); ++guard) {
        if (guard > 100000) fail("InternalError", "shortening did not terminate");
        int best = -1;
        Int best_dec = 0;
        for (int e = 0; e < T.num_edges(); ++e) {
            if (w[e] == 0 || !T.flippable(e)) continue;
            std::vector<Int> w2 = w;
            flip_step(T, e).apply(w2);
            Int dec = w[e] - w2[e];
            if (dec > best_dec) {
                best_dec = dec;
                best = e;
            }
        }
        std::vector<int> path;
        if (best >= 0) {
            path.push_back(best);
        } else {
            bool found = false;
            for (int depth = 1; depth <= 6 && !found; ++depth) {
                path.clear();
                found = improve(T, w, total(w), depth, -1, path);
            }
            if (!found) { std::string s; for (auto& x : w) s += x.get_str() + " "; fail("InternalError", "could not shorten curve to an annulus core: " + s); }
        }
        for (int e : path) {
            FlipStep st = flip_step(T, e);
            st.apply(w);
            P.to_core.push_back(st);
            T = T.flipped(e);
        }
    }
    P.core_tri = T;
    P.e = core->e;
    P.f = core->f;
    P.g = core->g;
    P.h = core->h;
    const auto& t1 = T.triangle(core->t1);
    int kg = 0;
    while (t1[kg].edge != P.g) ++kg;
    int r1 = t1[(kg + 1) % 3].edge, r2 = t1[(kg + 2) % 3].edge;
    P.pos_flip = flip_step(T, r1);
    P.neg_flip = flip_step(T, r2);
    P.pos_perm = rung_relabel(T, P.e, P.f, r1);
    P.neg_perm = rung_relabel(T, P.e, P.f, r2);
    return P;
}

}  // namespace

TwistPlanPtr twist_plan(const NormalCurve& a) {
    static std::mutex mu;
    static std::map<std::pair<std::pair<int, int>, std::vector<Int>>, TwistPlanPtr> cache;
    auto key = std::make_pair(std::make_pair(a.surface->spec.genus, a.surface->spec.punctures), a.corners);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    TwistPlanPtr plan;
    if (!is_small(a, 100000) || coreable(a)) plan = std::make_shared<const TwistPlan>(make_plan(a));
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() > 4096) cache.clear();
    cache.emplace(key, plan);
    return plan;
}

NormalCurve twist(const NormalCurve& a, const NormalCurve& c, long power) {
    if (!(a.surface->spec == c.surface->spec)) fail("SurfaceMismatch", "curves live on different surfaces");
    if (power == 0) return c;
    auto plan = twist_plan(a);
    if (!plan) return surgery_twist(a, c, power);
    std::vector<Int> w = plan->twist_weights(c.edge_weights(), power);
    return NormalCurve(c.surface, corners_from_edges(c.tri(), w));
}

Int intersection_via_flips(const NormalCurve& a, const NormalCurve& c) {
    if (!(a.surface->spec == c.surface->spec)) fail("SurfaceMismatch", "curves live on different surfaces");
    if (a.surface->spec.closed()) fail("ComplexityLimit", "flip intersections need a punctured surface");
    if (auto pa = twist_plan(a)) return pa->intersection(c.edge_weights());
    if (auto pc = twist_plan(c)) return pc->intersection(a.edge_weights());
    if (explicit_feasible(a, c)) return minimal_pair(a, c).V;
    fail("ComplexityLimit", "neither curve admits an annulus core and the pair is too large");
}

Int geometric_intersection(const NormalCurve& c, const NormalCurve& d) {
    if (!(c.surface->spec == d.surface->spec)) fail("SurfaceMismatch", "curves live on different surfaces");
    if (c.corners == d.corners) return 0;
    bool punctured = !c.surface->spec.closed();
    ExplicitLimits lim;
    if (punctured) lim.max_product = 20000;
    if (explicit_feasible(c, d, lim)) return minimal_pair(c, d, lim).V;
    if (punctured) {
        const NormalCurve& small = c.total_weight() <= d.total_weight() ? c : d;
        const NormalCurve& big = &small == &c ? d : c;
        return intersection_via_flips(small, big);
    }
    if (explicit_feasible(c, d)) return minimal_pair(c, d).V;
    fail("ComplexityLimit", "intersection on a closed surface exceeds the explicit engine budget");
}

bool same_curve(const NormalCurve& c, const NormalCurve& d) {
    if (!(c.surface->spec == d.surface->spec)) return false;
    if (c.corners == d.corners) return true;
    if (!c.surface->spec.closed()) return false;
    if (!explicit_feasible(c, d)) return false;
    PairMap g = minimal_pair(c, d);
    return g.V == 0 && g.isotopic;
}

}  // namespace pclab
