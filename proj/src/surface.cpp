#include "pclab/surface.hpp"

#include <map>
#include <mutex>
#include <numeric>

namespace pclab {

std::string to_string(const Int& x) { return x.get_str(); }

namespace {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

Triangulation::Triangulation(std::vector<std::array<Side, 3>> tris) : tris_(std::move(tris)) {
    int T = num_triangles();
    num_edges_ = 0;
    for (auto& t : tris_)
        for (auto& s : t) num_edges_ = std::max(num_edges_, s.edge + 1);
    edge_sides_.assign(num_edges_, {-1, -1});
    for (int s = 0; s < 3 * T; ++s) {
        Side sd = side(s);
        int slot = sd.fwd ? 0 : 1;
        if (edge_sides_[sd.edge][slot] != -1) fail("MalformedTriangulation", "edge side used twice");
        edge_sides_[sd.edge][slot] = s;
    }
    partner_.assign(3 * T, -1);
    for (int e = 0; e < num_edges_; ++e) {
        auto [a, b] = edge_sides_[e];
        if (a < 0 || b < 0) fail("MalformedTriangulation", "edge without two sides");
        partner_[a] = b;
        partner_[b] = a;
    }
    UnionFind uf(3 * T);
    for (int s = 0; s < 3 * T; ++s) {
        int p = partner_[s];
        int t = s / 3, k = s % 3, tp = p / 3, kp = p % 3;
        uf.unite(3 * t + (k + 1) % 3, 3 * tp + kp);
        uf.unite(3 * t + k, 3 * tp + (kp + 1) % 3);
    }
    corner_vertex_.assign(3 * T, -1);
    std::vector<int> id(3 * T, -1);
    num_vertices_ = 0;
    for (int c = 0; c < 3 * T; ++c) {
        int r = uf.find(c);
        if (id[r] < 0) id[r] = num_vertices_++;
        corner_vertex_[c] = id[r];
    }
}

bool Triangulation::flippable(int e) const {
    auto [a, b] = edge_sides_[e];
    return a / 3 != b / 3;
}

Triangulation Triangulation::flipped(int e) const {
    if (!flippable(e)) fail("NotFlippable", "edge borders a single triangle twice");
    auto [s1, s2] = edge_sides_[e];
    int t1 = s1 / 3, k1 = s1 % 3, t2 = s2 / 3, k2 = s2 % 3;
    Side a = tris_[t1][(k1 + 1) % 3], b = tris_[t1][(k1 + 2) % 3];
    Side c = tris_[t2][(k2 + 1) % 3], d = tris_[t2][(k2 + 2) % 3];
    auto nt = tris_;
    nt[t1] = {Side{e, true}, d, a};
    nt[t2] = {Side{e, false}, b, c};
    return Triangulation(std::move(nt));
}

int Surface::puncture_count() const {
    int n = 0;
    for (bool b : vertex_is_puncture) n += b;
    return n;
}

namespace {

// Insert a new vertex into triangle t (1-to-3 subdivision).
void subdivide(std::vector<std::array<Side, 3>>& tris, int t, int& next_edge) {
    auto [s0, s1, s2] = tris[t];
    int xa = next_edge++, xb = next_edge++, xc = next_edge++;
    tris[t] = {s0, Side{xb, false}, Side{xa, true}};
    tris.push_back({s1, Side{xc, false}, Side{xb, true}});
    tris.push_back({s2, Side{xa, false}, Side{xc, true}});
}

Surface make_canonical(int g, int m) {
    std::vector<std::array<Side, 3>> tris;
    int next_edge = 0;
    if (g >= 1) {
        int n = 4 * g;
        auto poly_side = [&](int i) {
            int j = i / 4, r = i % 4;
            int e = 2 * j + (r % 2);
            return Side{e, r < 2};
        };
        auto diag = [&](int i) { return 2 * g + (i - 2); };  // P0 -> Pi, i = 2..n-2
        next_edge = 2 * g + (n - 3);
        for (int i = 1; i <= n - 2; ++i) {
            Side first = (i == 1) ? poly_side(0) : Side{diag(i), true};
            Side mid = poly_side(i);
            Side last = (i + 1 == n - 1) ? poly_side(n - 1) : Side{diag(i + 1), false};
            tris.push_back({first, mid, last});
        }
    } else {
        tris.push_back({Side{0, true}, Side{1, true}, Side{2, true}});
        tris.push_back({Side{2, false}, Side{1, false}, Side{0, false}});
        next_edge = 3;
    }
    int base_vertices = (g >= 1) ? 1 : 3;
    int extra = (g >= 1) ? std::max(0, m - 1) : m - 3;
    for (int i = 0; i < extra; ++i) subdivide(tris, 0, next_edge);
    Surface S;
    S.spec = {g, m};
    S.tri = Triangulation(std::move(tris));
    int V = S.tri.num_vertices();
    if (V != base_vertices + extra) fail("MalformedTriangulation", "vertex count mismatch");
    S.vertex_is_puncture.assign(V, m > 0);
    if (S.tri.num_vertices() - S.tri.num_edges() + S.tri.num_triangles() != 2 - 2 * g)
        fail("MalformedTriangulation", "Euler count mismatch");
    return S;
}

}  // namespace

SurfacePtr build_surface(int genus, int punctures) {
    if (genus < 0 || punctures < 0 || 3 * genus - 3 + punctures < 2)
        fail("ExceptionalSurface", "surface (g=" + std::to_string(genus) + ", m=" +
                                       std::to_string(punctures) + ") is exceptional");
    static std::mutex mu;
    static std::map<std::pair<int, int>, SurfacePtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(genus, punctures);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto S = std::make_shared<const Surface>(make_canonical(genus, punctures));
    cache[key] = S;
    return S;
}

}  // namespace pclab
