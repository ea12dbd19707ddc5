#include "pclab/curve.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace pclab {

std::vector<Int> NormalCurve::edge_weights() const {
    std::vector<Int> w(tri().num_edges());
    for (int e = 0; e < tri().num_edges(); ++e) w[e] = edge_weight(e);
    return w;
}

Int NormalCurve::total_weight() const {
    Int s = 0;
    for (int e = 0; e < tri().num_edges(); ++e) s += edge_weight(e);
    return s;
}

std::size_t NormalCurve::hash() const {
    std::size_t h = 1469598103934665603ull;
    auto mix = [&](std::size_t v) { h = (h ^ v) * 1099511628211ull; };
    mix(static_cast<std::size_t>(surface->spec.genus * 131 + surface->spec.punctures));
    for (const Int& x : corners) {
        mp_size_t n = mpz_size(x.get_mpz_t());
        mix(static_cast<std::size_t>(n));
        for (mp_size_t i = 0; i < n; ++i) mix(static_cast<std::size_t>(mpz_getlimbn(x.get_mpz_t(), i)));
    }
    return h;
}

std::vector<Int> corners_from_edges(const Triangulation& T, const std::vector<Int>& w) {
    std::vector<Int> c(3 * T.num_triangles());
    for (int t = 0; t < T.num_triangles(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const Int& a = w[T.triangle(t)[(k + 2) % 3].edge];
            const Int& b = w[T.triangle(t)[k].edge];
            const Int& o = w[T.triangle(t)[(k + 1) % 3].edge];
            Int twice = a + b - o;
            if (twice < 0 || mpz_odd_p(twice.get_mpz_t()))
                fail("InvalidCurve", "edge weights violate a triangle inequality or parity");
            c[3 * t + k] = twice / 2;
        }
    }
    return c;
}

void check_normal(const NormalCurve& c) {
    const Triangulation& T = c.tri();
    if (static_cast<int>(c.corners.size()) != 3 * T.num_triangles())
        fail("InvalidCurve", "corner count list has wrong length");
    for (const Int& x : c.corners)
        if (x < 0) fail("InvalidCurve", "negative corner count");
    for (int e = 0; e < T.num_edges(); ++e) {
        auto [a, b] = T.sides_of_edge(e);
        if (c.side_weight(a) != c.side_weight(b))
            fail("InvalidCurve", "matching violated on edge " + std::to_string(e));
    }
}

bool is_vertex_link(const NormalCurve& c) {
    const Triangulation& T = c.tri();
    int v = -1;
    for (int i = 0; i < 3 * T.num_triangles(); ++i) {
        if (c.corners[i] == 0) continue;
        if (c.corners[i] != 1) return false;
        if (v == -1) v = T.corner_vertex(i);
        if (T.corner_vertex(i) != v) return false;
    }
    if (v == -1) return false;
    for (int i = 0; i < 3 * T.num_triangles(); ++i)
        if (T.corner_vertex(i) == v && c.corners[i] != 1) return false;
    return true;
}

bool is_small(const NormalCurve& c, long limit) {
    Int tot = c.total_weight();
    return tot <= limit;
}

std::vector<Word> trace_components(const NormalCurve& c) {
    const Triangulation& T = c.tri();
    int NT = T.num_triangles();
    if (!is_small(c, 20000000)) fail("ComplexityLimit", "curve too large to trace");
    std::vector<long> x(3 * NT), n(3 * NT), off(3 * NT + 1, 0);
    for (int i = 0; i < 3 * NT; ++i) x[i] = c.corners[i].get_si();
    for (int s = 0; s < 3 * NT; ++s) n[s] = c.side_weight(s).get_si();
    for (int i = 0; i < 3 * NT; ++i) off[i + 1] = off[i] + x[i];
    std::vector<char> seen(off[3 * NT], 0);
    std::vector<Word> out;
    for (int corner = 0; corner < 3 * NT; ++corner) {
        for (long j = 0; j < x[corner]; ++j) {
            if (seen[off[corner] + j]) continue;
            Word w;
            int t = corner / 3, k = corner % 3;
            long jj = j;
            int exit_k = k;  // leave through side k first
            while (true) {
                seen[off[3 * t + k] + jj] = 1;
                int s = 3 * t + exit_k;
                long pos = (exit_k == k) ? jj : n[s] - 1 - jj;
                w.push_back(s);
                int p = T.partner(s);
                long q = n[p] - 1 - pos;
                int t2 = p / 3, k2 = p % 3;
                if (q < x[3 * t2 + k2]) {
                    t = t2; k = k2; jj = q; exit_k = (k2 + 2) % 3;
                } else {
                    t = t2; k = (k2 + 1) % 3; jj = n[p] - 1 - q; exit_k = k;
                }
                if (t == corner / 3 && k == corner % 3 && jj == j) break;
            }
            out.push_back(std::move(w));
        }
    }
    return out;
}

std::vector<NormalCurve> split_components(const NormalCurve& c) {
    std::vector<NormalCurve> out;
    for (Word& w : trace_components(c)) {
        std::vector<Int> cc(c.corners.size(), 0);
        add_word_corners(c.tri(), w, cc);
        out.emplace_back(c.surface, std::move(cc));
    }
    return out;
}

void validate_curve(const NormalCurve& c) {
    check_normal(c);
    bool any = false;
    for (const Int& x : c.corners) any = any || x != 0;
    if (!any) fail("InvalidCurve", "empty curve");
    if (is_small(c, 2000000)) {
        auto comps = trace_components(c);
        if (comps.size() != 1)
            fail("InvalidCurve", "connectedness violated: " + std::to_string(comps.size()) + " components");
    }
    if (is_vertex_link(c)) fail("InvalidCurve", "curve is inessential (vertex link)");
}

Word inverse_word(const Triangulation& T, const Word& w) {
    Word r(w.rbegin(), w.rend());
    for (int& s : r) s = T.partner(s);
    return r;
}

void reduce_free(const Triangulation& T, Word& w) {
    Word st;
    st.reserve(w.size());
    for (int s : w) {
        if (!st.empty() && T.partner(st.back()) == s)
            st.pop_back();
        else
            st.push_back(s);
    }
    w.swap(st);
}

void reduce_cyclic(const Triangulation& T, Word& w) {
    reduce_free(T, w);
    std::size_t lo = 0, hi = w.size();
    while (hi - lo >= 2 && T.partner(w[hi - 1]) == w[lo]) {
        ++lo;
        --hi;
    }
    w = Word(w.begin() + lo, w.begin() + hi);
}

void add_word_corners(const Triangulation& T, const Word& w, std::vector<Int>& corners) {
    std::size_t n = w.size();
    for (std::size_t i = 0; i < n; ++i) {
        int p = T.partner(w[i]);
        int y = w[(i + 1) % n];
        int t = p / 3, k1 = p % 3, k2 = y % 3;
        if (y / 3 != t || y == p) fail("InvalidWord", "crossing word is not a closed path");
        int corner = (k2 == (k1 + 1) % 3) ? k2 : k1;
        corners[3 * t + corner] += 1;
    }
}

NormalCurve curve_from_word(const SurfacePtr& S, Word w) {
    reduce_cyclic(S->tri, w);
    std::vector<Int> cc(3 * S->tri.num_triangles(), 0);
    add_word_corners(S->tri, w, cc);
    return NormalCurve(S, std::move(cc));
}

namespace {

// Shortest dual path (as crossing word) from triangle a to triangle b.
Word dual_path(const Triangulation& T, int a, int b) {
    int NT = T.num_triangles();
    std::vector<int> via(NT, -2);
    std::deque<int> q{a};
    via[a] = -1;
    while (!q.empty()) {
        int t = q.front();
        q.pop_front();
        if (t == b) break;
        for (int k = 0; k < 3; ++k) {
            int s = 3 * t + k;
            int t2 = T.partner(s) / 3;
            if (via[t2] == -2) {
                via[t2] = s;
                q.push_back(t2);
            }
        }
    }
    Word w;
    for (int t = b; t != a; t = via[t] / 3) w.push_back(via[t]);
    std::reverse(w.begin(), w.end());
    return w;
}

}  // namespace

NormalCurve random_curve(const SurfacePtr& S, std::uint64_t seed, int bound) {
    if (bound < 1) fail("InvalidArgument", "complexity bound must be >= 1");
    const Triangulation& T = S->tri;
    std::mt19937_64 rng(seed);
    int E = T.num_edges();
    long max_len = 2 + static_cast<long>(bound) * E / 2;
    for (int attempt = 0;; ++attempt) {
        long len = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(max_len));
        int start = static_cast<int>(rng() % static_cast<std::uint64_t>(T.num_triangles()));
        Word w;
        int t = start;
        int came = -1;
        for (long i = 0; i < len; ++i) {
            int k;
            do {
                k = static_cast<int>(rng() % 3);
            } while (3 * t + k == came && T.num_triangles() > 0);
            int s = 3 * t + k;
            w.push_back(s);
            came = T.partner(s);
            t = came / 3;
        }
        Word back = dual_path(T, t, start);
        w.insert(w.end(), back.begin(), back.end());
        reduce_cyclic(T, w);
        if (w.empty()) continue;
        std::vector<Int> cc(3 * T.num_triangles(), 0);
        add_word_corners(T, w, cc);
        NormalCurve multi(S, std::move(cc));
        bool within = true;
        for (int e = 0; e < E && within; ++e) within = multi.edge_weight(e) <= bound;
        std::vector<NormalCurve> comps;
        for (auto& c : split_components(multi))
            if (!is_vertex_link(c)) comps.push_back(std::move(c));
        if (comps.empty()) continue;
        NormalCurve pick = comps[rng() % comps.size()];
        bool ok = true;
        for (int e = 0; e < E && ok; ++e) ok = pick.edge_weight(e) <= bound;
        if (ok) return pick;
        (void)within;
    }
}

std::vector<NormalCurve> short_curves(const SurfacePtr& S, int max_weight) {
    std::vector<NormalCurve> out;
    std::set<std::vector<Int>> seen;
    for (std::uint64_t seed = 0; seed < 3000; ++seed) {
        NormalCurve c = random_curve(S, 0x5eed0000ull + seed, max_weight);
        if (seen.insert(c.corners).second) out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const NormalCurve& a, const NormalCurve& b) {
        Int ta = a.total_weight(), tb = b.total_weight();
        if (ta != tb) return ta < tb;
        return a.corners < b.corners;
    });
    return out;
}

}  // namespace pclab
