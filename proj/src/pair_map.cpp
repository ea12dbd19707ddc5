#include "pclab/pair_map.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace pclab {

namespace {

struct UF {
    std::vector<int> p;
    int add() {
        p.push_back(static_cast<int>(p.size()));
        return p.back();
    }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
};

struct Chord {
    int curve;
    long a, b;        // perimeter keys, a < b
    int na, nb;       // boundary nodes
    std::vector<int> xs;  // local crossing ids, ordered from the a-end
};

// Cell complex of one triangle cut by the chords of c and d.
struct TriCells {
    int nbnd = 0;
    std::array<int, 3> base{};
    std::array<long, 3> N{};
    std::vector<std::array<int, 4>> rot;
    std::vector<int> deg;
    std::vector<int> he_to, he_twin, he_slot, he_cell;
    std::vector<int> perim_fwd;
    int ncross = 0;
    int cross_offset = 0;

    int add_node(int d) {
        rot.push_back({-1, -1, -1, -1});
        deg.push_back(d);
        return static_cast<int>(rot.size()) - 1;
    }
    int add_pair(int u, int su, int v, int sv) {
        int h = static_cast<int>(he_to.size());
        he_to.push_back(v);
        he_to.push_back(u);
        he_twin.push_back(h + 1);
        he_twin.push_back(h);
        he_slot.push_back(su);
        he_slot.push_back(sv);
        rot[u][su] = h;
        rot[v][sv] = h + 1;
        return h;
    }
    int next(int h) const {
        int v = he_to[h];
        int tw = he_twin[h];
        return rot[v][(he_slot[tw] + deg[v] - 1) % deg[v]];
    }
};

struct RegionBook {
    UF uf;
    std::vector<int> chi;
    std::vector<std::vector<int>> punct;
    std::vector<int> verts;
    std::vector<char> dead;
    int merge(int a, int b, int chi_new) {
        a = uf.find(a);
        b = uf.find(b);
        if (a != b) {
            uf.p[a] = b;
            punct[b].insert(punct[b].end(), punct[a].begin(), punct[a].end());
            punct[a].clear();
            verts[b] += verts[a];
        }
        chi[b] = chi_new;
        return b;
    }
};

}  // namespace

bool explicit_feasible(const NormalCurve& c, const NormalCurve& d, const ExplicitLimits& lim) {
    Int tc = c.total_weight(), td = d.total_weight();
    if (!tc.fits_slong_p() || !td.fits_slong_p()) return false;
    Int prod = tc * td;
    return prod <= lim.max_product && tc <= 4000000 && td <= 4000000;
}

PairMap minimal_pair(const NormalCurve& c, const NormalCurve& d, const ExplicitLimits& lim) {
    if (!(c.surface->spec == d.surface->spec)) fail("SurfaceMismatch", "curves live on different surfaces");
    if (!explicit_feasible(c, d, lim)) fail("ComplexityLimit", "pair too large for the explicit engine");
    const SurfacePtr& S = c.surface;
    const Triangulation& T = S->tri;
    const int NT = T.num_triangles();
    std::array<const NormalCurve*, 2> curves{&c, &d};
    std::vector<std::array<long, 2>> ns(3 * NT);
    for (int s = 0; s < 3 * NT; ++s)
        for (int X = 0; X < 2; ++X) ns[s][X] = curves[X]->side_weight(s).get_si();
    auto Nside = [&](int s) { return ns[s][0] + ns[s][1]; };
    // c points come first along each edge in its own orientation.
    auto side_pos = [&](int s, int X, long i) -> long {
        long n_c = ns[s][0], n_X = ns[s][X], N = n_c + ns[s][1];
        if (T.side(s).fwd) return X == 0 ? i : n_c + i;
        long ic = n_X - 1 - i;
        long canon = X == 0 ? ic : n_c + ic;
        return N - 1 - canon;
    };

    std::vector<TriCells> cells(NT);
    UF cell_uf;
    std::vector<std::vector<int>> seg_cell(3 * NT);
    int total_cross = 0;

    for (int t = 0; t < NT; ++t) {
        TriCells& tc = cells[t];
        long key_span = 1;
        for (int k = 0; k < 3; ++k) {
            tc.N[k] = Nside(3 * t + k);
            key_span = std::max(key_span, tc.N[k] + 2);
        }
        int nb = 0;
        for (int k = 0; k < 3; ++k) {
            tc.base[k] = nb;
            nb += 1 + static_cast<int>(tc.N[k]);
        }
        tc.nbnd = nb;
        for (int k = 0; k < 3; ++k) {
            tc.add_node(2);
            for (long p = 0; p < tc.N[k]; ++p) tc.add_node(3);
        }
        tc.perim_fwd.resize(nb);
        for (int i = 0; i < nb; ++i) {
            int u = i, v = (i + 1) % nb;
            int sv = tc.deg[v] == 2 ? 1 : 2;
            tc.perim_fwd[i] = tc.add_pair(u, 0, v, sv);
        }
        auto key_node = [&](int k, long pos) { return std::make_pair(k * key_span + pos, tc.base[k] + 1 + static_cast<int>(pos)); };

        std::vector<Chord> chords[2];
        for (int X = 0; X < 2; ++X) {
            for (int k = 0; k < 3; ++k) {
                long x = curves[X]->corners[3 * t + k].get_si();
                int km = (k + 2) % 3;
                for (long j = 0; j < x; ++j) {
                    auto [k1, n1] = key_node(k, side_pos(3 * t + k, X, j));
                    auto [k2, n2] = key_node(km, side_pos(3 * t + km, X, ns[3 * t + km][X] - 1 - j));
                    Chord ch{X, k1, k2, n1, n2, {}};
                    if (ch.a > ch.b) {
                        std::swap(ch.a, ch.b);
                        std::swap(ch.na, ch.nb);
                    }
                    chords[X].push_back(std::move(ch));
                }
            }
        }
        struct Cross { int ci, di; bool dleft_is_a; int node; };
        std::vector<Cross> xs;
        for (int ci = 0; ci < static_cast<int>(chords[0].size()); ++ci) {
            Chord& C = chords[0][ci];
            for (int di = 0; di < static_cast<int>(chords[1].size()); ++di) {
                Chord& D = chords[1][di];
                bool ia = C.a < D.a && D.a < C.b, ib = C.a < D.b && D.b < C.b;
                if (ia == ib) continue;
                int id = static_cast<int>(xs.size());
                xs.push_back({ci, di, !ia, -1});
                C.xs.push_back(id);
                D.xs.push_back(id);
            }
        }
        tc.ncross = static_cast<int>(xs.size());
        tc.cross_offset = total_cross;
        total_cross += tc.ncross;
        for (auto& x : xs) x.node = tc.add_node(4);
        auto inside = [](long k, const Chord& ch) { return ch.a < k && k < ch.b; };
        for (int X = 0; X < 2; ++X) {
            for (Chord& ch : chords[X]) {
                auto other = [&](int id) -> const Chord& {
                    return X == 0 ? chords[1][xs[id].di] : chords[0][xs[id].ci];
                };
                std::sort(ch.xs.begin(), ch.xs.end(), [&](int i1, int i2) {
                    const Chord& D1 = other(i1);
                    const Chord& D2 = other(i2);
                    return inside(D2.a, D1) != inside(ch.a, D1);
                });
                std::vector<int> seq{ch.na};
                for (int id : ch.xs) seq.push_back(xs[id].node);
                seq.push_back(ch.nb);
                auto slot = [&](std::size_t idx, bool toward_b) -> int {
                    int node = seq[idx];
                    if (node < nb) return 1;
                    const Cross& x = xs[node - nb];
                    if (X == 0) return toward_b ? 0 : 2;
                    bool to_left = (x.dleft_is_a != toward_b);
                    return to_left ? 1 : 3;
                };
                for (std::size_t i = 0; i + 1 < seq.size(); ++i)
                    tc.add_pair(seq[i], slot(i, true), seq[i + 1], slot(i + 1, false));
            }
        }
        int H = static_cast<int>(tc.he_to.size());
        std::vector<int> face(H, -1);
        int nf = 0;
        for (int h = 0; h < H; ++h) {
            if (face[h] >= 0) continue;
            for (int g = h; face[g] < 0; g = tc.next(g)) face[g] = nf;
            ++nf;
        }
        int outer = face[tc.he_twin[tc.perim_fwd[0]]];
        std::vector<int> gid(nf, -1);
        for (int f = 0; f < nf; ++f)
            if (f != outer) gid[f] = cell_uf.add();
        tc.he_cell.resize(H);
        for (int h = 0; h < H; ++h) tc.he_cell[h] = gid[face[h]];
        for (int k = 0; k < 3; ++k) {
            auto& sc = seg_cell[3 * t + k];
            sc.resize(tc.N[k] + 1);
            for (long sgm = 0; sgm <= tc.N[k]; ++sgm) sc[sgm] = tc.he_cell[tc.perim_fwd[tc.base[k] + sgm]];
        }
    }

    int ncell = static_cast<int>(cell_uf.p.size());
    for (int e = 0; e < T.num_edges(); ++e) {
        auto [sa, sb] = T.sides_of_edge(e);
        long N = Nside(sa);
        for (long sgm = 0; sgm <= N; ++sgm) {
            int x = cell_uf.find(seg_cell[sa][sgm]), y = cell_uf.find(seg_cell[sb][N - sgm]);
            if (x != y) cell_uf.p[x] = y;
        }
    }
    RegionBook book;
    book.uf = cell_uf;
    book.chi.assign(ncell, 0);
    book.punct.assign(ncell, {});
    book.verts.assign(ncell, 0);
    book.dead.assign(ncell, 0);
    for (int x = 0; x < ncell; ++x) book.chi[book.uf.find(x)] += 1;
    for (int e = 0; e < T.num_edges(); ++e) {
        int sa = T.sides_of_edge(e)[0];
        for (int cid : seg_cell[sa]) book.chi[book.uf.find(cid)] -= 1;
    }
    std::vector<char> vseen(T.num_vertices(), 0);
    for (int corner = 0; corner < 3 * NT; ++corner) {
        int v = T.corner_vertex(corner);
        if (vseen[v]) continue;
        vseen[v] = 1;
        int r = book.uf.find(seg_cell[corner][0]);
        book.chi[r] += 1;
        book.verts[r] += 1;
        if (S->vertex_is_puncture[v]) book.punct[r].push_back(v);
    }

    // Darts and edge words.
    int V = total_cross;
    std::vector<int> alpha(4 * V, -1), region(4 * V, -1);
    std::vector<Word> word(4 * V);
    for (int t = 0; t < NT; ++t) {
        const TriCells& tc = cells[t];
        for (int lx = 0; lx < tc.ncross; ++lx) {
            int node = tc.nbnd + lx;
            for (int sl = 0; sl < 4; ++sl) {
                int dart = 4 * (tc.cross_offset + lx) + sl;
                int h = tc.rot[node][sl];
                region[dart] = book.uf.find(tc.he_cell[tc.he_twin[h]]);
                int tt = t;
                Word w;
                while (true) {
                    const TriCells& cur = cells[tt];
                    int v = cur.he_to[h];
                    if (v >= cur.nbnd) {
                        alpha[dart] = 4 * (cur.cross_offset + v - cur.nbnd) + cur.he_slot[cur.he_twin[h]];
                        break;
                    }
                    int k = v >= cur.base[2] ? 2 : (v >= cur.base[1] ? 1 : 0);
                    long p = v - cur.base[k] - 1;
                    int s = 3 * tt + k;
                    w.push_back(s);
                    int ps = T.partner(s);
                    tt = ps / 3;
                    const TriCells& nxt = cells[tt];
                    int k2 = ps % 3;
                    long p2 = nxt.N[k2] - 1 - p;
                    h = nxt.rot[nxt.base[k2] + 1 + p2][1];
                }
                word[dart] = std::move(w);
            }
        }
    }

    // Bigon removal.
    std::vector<char> alive(V, 1);
    int liveV = V;
    auto sig = [](int x) { return (x & ~3) | ((x + 1) & 3); };
    auto opp = [](int x) { return (x & ~3) | ((x + 2) & 3); };
    auto phi = [&](int x) { return sig(alpha[x]); };
    auto reg = [&](int x) { return book.uf.find(region[x]); };
    std::vector<int> work(4 * V);
    std::iota(work.rbegin(), work.rend(), 0);
    while (!work.empty() && liveV > 0) {
        int h = work.back();
        work.pop_back();
        if (!alive[h / 4]) continue;
        int h2 = phi(h);
        if (h2 == h || phi(h2) != h) continue;
        int B = reg(h);
        if (book.chi[B] != 1 || !book.punct[B].empty()) continue;
        if (h / 4 == h2 / 4) continue;
        int h1 = (h & 1) == 0 ? h : h2;
        h2 = phi(h1);
        int p1 = sig(h1), q1 = opp(h1);
        int r1 = sig(h2), s1 = opp(h2);
        int L = reg(q1), R = reg(s1);
        int chi_new = (L == R) ? book.chi[L] - 1 : book.chi[L] + book.chi[R] - 1;
        book.merge(L, R, chi_new);
        book.dead[B] = 1;
        int v = h1 / 4, w = h2 / 4;
        if (liveV == 2) {
            alive[v] = alive[w] = 0;
            liveV = 0;
            break;
        }
        int a = alpha[q1], b = alpha[r1], a2 = alpha[p1], b2 = alpha[s1];
        if (a / 4 == v || a / 4 == w || a2 / 4 == v || a2 / 4 == w)
            fail("MalformedGraph", "bigon surgery met a degenerate strand");
        Word wc = word[a];
        wc.insert(wc.end(), word[h1].begin(), word[h1].end());
        wc.insert(wc.end(), word[r1].begin(), word[r1].end());
        reduce_free(T, wc);
        Word wd = word[a2];
        // d is pushed across the bigon onto the far side of its c-arc, so the word stays
        // embedded even when the bigon contains the marked vertex of a closed surface.
        wd.insert(wd.end(), word[h1].begin(), word[h1].end());
        wd.insert(wd.end(), word[s1].begin(), word[s1].end());
        reduce_free(T, wd);
        word[b] = inverse_word(T, wc);
        word[a] = std::move(wc);
        word[b2] = inverse_word(T, wd);
        word[a2] = std::move(wd);
        alpha[a] = b;
        alpha[b] = a;
        alpha[a2] = b2;
        alpha[b2] = a2;
        alive[v] = alive[w] = 0;
        liveV -= 2;
        for (int x : {a, b, a2, b2})
            for (int j = 0; j < 4; ++j) work.push_back((x & ~3) | j);
    }

    // Compact.
    PairMap g;
    g.surface = S;
    std::vector<int> newv(V, -1);
    int nv = 0;
    for (int v = 0; v < V; ++v)
        if (alive[v]) newv[v] = nv++;
    g.V = nv;
    g.alpha.assign(4 * nv, -1);
    g.word.assign(4 * nv, {});
    g.region.assign(4 * nv, -1);
    std::vector<int> rid(ncell, -1);
    for (int v = 0; v < V; ++v) {
        if (!alive[v]) continue;
        for (int k = 0; k < 4; ++k) {
            int x = 4 * v + k, y = 4 * newv[v] + k;
            int ax = alpha[x];
            g.alpha[y] = 4 * newv[ax / 4] + (ax & 3);
            g.word[y] = std::move(word[x]);
            int r = reg(x);
            if (rid[r] < 0) {
                rid[r] = static_cast<int>(g.regions.size());
                g.regions.push_back({book.chi[r], book.punct[r], book.verts[r]});
            }
            g.region[y] = rid[r];
        }
    }
    for (int x = 0; x < ncell; ++x) {
        int r = book.uf.find(x);
        if (r != x || book.dead[r] || rid[r] >= 0) continue;
        rid[r] = static_cast<int>(g.regions.size());
        g.regions.push_back({book.chi[r], book.punct[r], book.verts[r]});
    }
    for (auto& rd : g.regions) std::sort(rd.punctures.begin(), rd.punctures.end());
    if (nv == 0)
        for (auto& rd : g.regions)
            if (rd.chi == 0 && rd.punctures.empty()) g.isotopic = true;
    return g;
}

PairMap embed_pair(const NormalCurve& c, const NormalCurve& d) {
    PairMap g = minimal_pair(c, d);
    if (g.V == 0) {
        if (g.isotopic) fail("EqualCurves", "curves are isotopic");
        fail("DisjointPair", "curves are disjoint");
    }
    return g;
}

NormalCurve surgery_twist(const NormalCurve& a, const NormalCurve& c, long n) {
    if (n == 0) return c;
    ExplicitLimits lim;
    PairMap g = minimal_pair(a, c, lim);
    if (g.V == 0) return c;
    const Triangulation& T = a.tri();
    long reps = n > 0 ? n : -n;
    Word w;
    int start = 1;
    int cur = start;
    do {
        w.insert(w.end(), g.word[cur].begin(), g.word[cur].end());
        int y = g.alpha[cur];
        // Turn onto a, run once around it per power, then resume along c.
        int z = n > 0 ? g.sigma_inv(y) : g.sigma(y);
        for (long r = 0; r < reps; ++r) {
            int u = z;
            do {
                w.insert(w.end(), g.word[u].begin(), g.word[u].end());
                u = g.opposite(g.alpha[u]);
            } while (u != z);
        }
        cur = g.opposite(y);
    } while (cur != start);
    return curve_from_word(a.surface, std::move(w));
}

bool coreable(const NormalCurve& a) {
    PairMap g = minimal_pair(a, a);
    int empty = 0;
    for (const RegionData& r : g.regions) empty += r.vertices == 0;
    return empty == 1;
}

void check_pair_map(const PairMap& g) {
    if (static_cast<int>(g.alpha.size()) != 4 * g.V) fail("MalformedGraph", "dart count is not 4V");
    for (int x = 0; x < 4 * g.V; ++x) {
        int y = g.alpha[x];
        if (y < 0 || y >= 4 * g.V || y == x || g.alpha[y] != x)
            fail("MalformedGraph", "edge involution broken at dart " + std::to_string(x));
        if ((x & 1) != (y & 1)) fail("MalformedGraph", "edge joins a c-dart to a d-dart");
        if (g.region[x] != g.region[g.phi(x)]) fail("MalformedGraph", "face labels inconsistent");
    }
}

}  // namespace pclab
