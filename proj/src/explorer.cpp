#include "pclab/explorer.hpp"

#include "pclab/flips.hpp"
#include "pclab/parallel.hpp"

#include <deque>
#include <random>
#include <unordered_map>

namespace pclab {

std::uint64_t OrbitGraph::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::uint64_t x) {
        h ^= x;
        h *= 1099511628211ULL;
    };
    mix(static_cast<std::uint64_t>(vertices.size()));
    for (const NormalCurve& c : vertices) mix(c.hash());
    for (const auto& nb : adj) {
        mix(nb.size());
        for (int v : nb) mix(static_cast<std::uint64_t>(v));
    }
    return h;
}

OrbitGraph graph_from_adjacency(std::vector<std::vector<int>> adj) {
    OrbitGraph g;
    g.adj = std::move(adj);
    for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
    g.vertices.resize(g.adj.size());
    g.provenance.resize(g.adj.size());
    return g;
}

OrbitGraph build_orbit_ball(const NormalCurve& base, const std::vector<MappingClass>& generators, int word_radius,
                            const EdgeRule& rule) {
    if (word_radius < 0) fail("InvalidArgument", "word radius must be nonnegative");
    OrbitGraph g;
    g.rule = rule;
    g.vertices.push_back(base);
    g.provenance.push_back({});
    std::unordered_map<std::size_t, std::vector<int>> index;
    index[base.hash()].push_back(0);
    std::vector<MappingClass> letters;
    for (const MappingClass& f : generators) {
        letters.push_back(f);
        letters.push_back(f.inverse());
    }
    std::vector<int> frontier{0};
    for (int r = 0; r < word_radius; ++r) {
        std::vector<NormalCurve> images(frontier.size() * letters.size());
        parallel_for(static_cast<long>(images.size()), 0, [&](long i) {
            images[i] = apply(letters[i % letters.size()], g.vertices[frontier[i / letters.size()]]);
        });
        std::vector<int> next;
        for (std::size_t i = 0; i < images.size(); ++i) {
            const NormalCurve& x = images[i];
            auto& bucket = index[x.hash()];
            bool known = false;
            for (int j : bucket) known = known || g.vertices[j].same_coordinates(x);
            if (known) continue;
            int id = g.size();
            bucket.push_back(id);
            g.vertices.push_back(x);
            std::vector<int> prov{static_cast<int>(i % letters.size())};
            const auto& old = g.provenance[frontier[i / letters.size()]];
            prov.insert(prov.end(), old.begin(), old.end());
            g.provenance.push_back(std::move(prov));
            next.push_back(id);
        }
        frontier = std::move(next);
    }
    int n = g.size();
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
    std::vector<signed char> edge(pairs.size(), 0);
    parallel_for(static_cast<long>(pairs.size()), 0, [&](long k) {
        const NormalCurve& x = g.vertices[pairs[k].first];
        const NormalCurve& y = g.vertices[pairs[k].second];
        if (!explicit_feasible(x, y)) {
            edge[k] = -1;
            return;
        }
        try {
            edge[k] = adjacent(x, y, rule) ? 1 : 0;
        } catch (const Error& e) {
            if (e.code() != "EqualCurves") throw;
        }
    });
    g.adj.assign(n, {});
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (edge[k] < 0) ++g.skipped_pairs;
        if (edge[k] != 1) continue;
        g.adj[pairs[k].first].push_back(pairs[k].second);
        g.adj[pairs[k].second].push_back(pairs[k].first);
    }
    for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
    return g;
}

std::vector<std::vector<int>> all_distances(const OrbitGraph& g) {
    int n = g.size();
    std::vector<std::vector<int>> D(n, std::vector<int>(n, -1));
    for (int s = 0; s < n; ++s) {
        std::deque<int> q{s};
        D[s][s] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int v : g.adj[u])
                if (D[s][v] < 0) {
                    D[s][v] = D[s][u] + 1;
                    q.push_back(v);
                }
        }
    }
    return D;
}

namespace {

std::vector<std::vector<int>> connected_distances(const OrbitGraph& g) {
    auto D = all_distances(g);
    for (const auto& row : D)
        for (int x : row)
            if (x < 0) fail("DisconnectedGraph", "the orbit graph is not connected");
    return D;
}

int four_point_defect2(const std::vector<std::vector<int>>& D, int x, int y, int z, int w) {
    int s[3] = {D[x][y] + D[z][w], D[x][z] + D[y][w], D[x][w] + D[y][z]};
    std::sort(s, s + 3);
    return s[2] - s[1];
}

}  // namespace

DeltaReport estimate_delta(const OrbitGraph& g, long sample_count, std::uint64_t seed) {
    auto D = connected_distances(g);
    int n = g.size();
    DeltaReport r;
    if (n < 4) {
        r.exhaustive = true;
        return r;
    }
    double subsets = static_cast<double>(n) * (n - 1) * (n - 2) * (n - 3) / 24.0;
    int best = -1;
    auto consider = [&](int x, int y, int z, int w) {
        ++r.tuples;
        int d2 = four_point_defect2(D, x, y, z, w);
        if (d2 > best) {
            best = d2;
            r.worst = {x, y, z, w};
        }
    };
    if (subsets <= static_cast<double>(sample_count)) {
        r.exhaustive = true;
        for (int x = 0; x < n; ++x)
            for (int y = x + 1; y < n; ++y)
                for (int z = y + 1; z < n; ++z)
                    for (int w = z + 1; w < n; ++w) consider(x, y, z, w);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (long k = 0; k < sample_count; ++k) {
            int v[4];
            for (int i = 0; i < 4; ++i) {
                bool fresh;
                do {
                    v[i] = pick(rng);
                    fresh = true;
                    for (int j = 0; j < i; ++j) fresh = fresh && v[j] != v[i];
                } while (!fresh);
            }
            consider(v[0], v[1], v[2], v[3]);
        }
    }
    r.delta = best / 2.0;
    return r;
}

BottleneckReport bottleneck_report(const OrbitGraph& g, long pair_samples, std::uint64_t seed) {
    auto D = connected_distances(g);
    int n = g.size();
    BottleneckReport rep;
    std::vector<std::pair<int, int>> pairs;
    long total = static_cast<long>(n) * (n - 1) / 2;
    if (total <= pair_samples) {
        rep.exhaustive = true;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (long k = 0; k < pair_samples; ++k) {
            int u = pick(rng), v;
            do v = pick(rng);
            while (v == u);
            pairs.push_back({std::min(u, v), std::max(u, v)});
        }
    }
    for (auto [u, v] : pairs) {
        BottleneckPair bp;
        bp.u = u;
        bp.v = v;
        bp.distance = D[u][v];
        // geodesic: walk from v towards u through the smallest-index predecessor
        std::vector<int> path{v};
        for (int x = v; x != u;) {
            for (int y : g.adj[x])
                if (D[u][y] == D[u][x] - 1) {
                    x = y;
                    break;
                }
            path.push_back(x);
        }
        std::reverse(path.begin(), path.end());
        bp.midpoint = path[bp.distance / 2];
        const auto& dm = D[bp.midpoint];
        for (int r = std::min(dm[u], dm[v]); r >= 0; --r) {
            std::vector<char> seen(n, 0);
            std::deque<int> q{u};
            seen[u] = 1;
            while (!q.empty()) {
                int x = q.front();
                q.pop_front();
                for (int y : g.adj[x])
                    if (!seen[y] && dm[y] >= r) {
                        seen[y] = 1;
                        q.push_back(y);
                    }
            }
            if (seen[v]) {
                bp.deviation = r;
                break;
            }
        }
        rep.pairs.push_back(bp);
    }
    double sum = 0;
    for (const auto& bp : rep.pairs) {
        rep.max_deviation = std::max(rep.max_deviation, bp.deviation);
        sum += bp.deviation;
        if (static_cast<int>(rep.histogram.size()) <= bp.deviation) rep.histogram.resize(bp.deviation + 1, 0);
        ++rep.histogram[bp.deviation];
    }
    if (!rep.pairs.empty()) rep.mean_deviation = sum / static_cast<double>(rep.pairs.size());
    return rep;
}

namespace {

std::optional<Int> safe_intersection(const NormalCurve& x, const NormalCurve& y) {
    try {
        return geometric_intersection(x, y);
    } catch (const Error& e) {
        if (e.code() == "ComplexityLimit") return std::nullopt;
        throw;
    }
}

std::optional<int> witnessed_bound(const NormalCurve& x, const NormalCurve& base, const EdgeRule& rule, int budget) {
    try {
        if (same_curve(x, base)) return 0;
        if (budget > 0) return pc_upper_bound(x, base, rule, budget).bound;
        if (explicit_feasible(x, base) && adjacent(x, base, rule)) return 1;
    } catch (const Error& e) {
        if (e.code() != "ComplexityLimit") throw;
    }
    return std::nullopt;
}

}  // namespace

OrbitGrowth orbit_growth(const MappingClass& phi, const NormalCurve& base, int n, const EdgeRule& rule,
                         int pc_budget) {
    if (n < 0) fail("InvalidArgument", "orbit length must be nonnegative");
    OrbitGrowth r;
    r.orbit.push_back(base);
    for (int k = 1; k <= n; ++k) r.orbit.push_back(apply(phi, r.orbit.back()));
    bool all_equal = true, all_bounded = true;
    int worst = 0;
    for (int k = 0; k <= n; ++k) {
        r.intersections.push_back(safe_intersection(r.orbit[k], base));
        r.pc_bounds.push_back(witnessed_bound(r.orbit[k], base, rule, pc_budget));
        all_equal = all_equal && r.pc_bounds.back() == 0;
        if (r.pc_bounds.back()) worst = std::max(worst, *r.pc_bounds.back());
        else all_bounded = false;
    }
    if (all_equal) {
        r.witnessed_bounded = true;
        r.diameter_bound = 0;
    } else if (all_bounded) {
        r.diameter_bound = 2 * worst;  // through the base point
    }
    return r;
}

OrbitGrowth orbit_growth(const PseudoAnosovSpec& tv, int n, const EdgeRule& rule, int pc_budget) {
    OrbitGrowth r = orbit_growth(tv.phi, tv.a, n, rule, pc_budget);
    try {
        PennerOrbit P = penner_orbit(tv.a, tv.b, n);
        bool ok = track_violations(P.track).empty() && is_recurrent(P.track);
        for (int k = 0; k <= n && ok; ++k)
            ok = verify_certificate(P.track, CarryingCertificate{r.orbit[k], P.weights[k]});
        r.carrier_maximal = is_maximal(P.track);
        r.carrier_verified = ok;
        r.carrier = std::move(P);
    } catch (const Error& e) {
        if (e.code() != "NoCarrier" && e.code() != "ComplexityLimit") throw;
    }
    if (r.carrier_verified && !r.carrier_maximal) {
        // curves carried by one non-maximal track are pairwise at distance at most one
        r.witnessed_bounded = true;
        r.diameter_bound = std::min(r.diameter_bound.value_or(1), 1);
    }
    return r;
}

}  // namespace pclab
