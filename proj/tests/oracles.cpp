#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>

namespace oracle {

namespace {

std::vector<Int> primitive(const std::vector<Int>& v) {
    Int g = 0;
    for (const Int& x : v) g = gcd(g, x);
    std::vector<Int> out(v);
    if (g > 1)
        for (Int& x : out) x /= g;
    return out;
}

}  // namespace

std::vector<std::vector<Int>> dd_extreme_rays(const std::vector<std::vector<int>>& A, int n) {
    std::vector<std::vector<Int>> rays;
    for (int i = 0; i < n; ++i) {
        std::vector<Int> e(n, 0);
        e[i] = 1;
        rays.push_back(e);
    }
    for (const auto& row : A) {
        std::vector<Int> s;
        for (const auto& r : rays) {
            Int v = 0;
            for (int i = 0; i < n; ++i) v += row[i] * r[i];
            s.push_back(v);
        }
        auto zeros = [&](const std::vector<Int>& r) {
            std::vector<char> z(n);
            for (int i = 0; i < n; ++i) z[i] = r[i] == 0;
            return z;
        };
        std::vector<std::vector<char>> Z;
        for (const auto& r : rays) Z.push_back(zeros(r));
        std::vector<std::vector<Int>> next;
        for (std::size_t k = 0; k < rays.size(); ++k)
            if (s[k] == 0) next.push_back(rays[k]);
        for (std::size_t p = 0; p < rays.size(); ++p) {
            if (s[p] <= 0) continue;
            for (std::size_t q = 0; q < rays.size(); ++q) {
                if (s[q] >= 0) continue;
                std::vector<char> common(n);
                for (int i = 0; i < n; ++i) common[i] = Z[p][i] && Z[q][i];
                bool adjacent = true;
                for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
                    if (r == p || r == q) continue;
                    bool contains = true;
                    for (int i = 0; i < n && contains; ++i) contains = !common[i] || Z[r][i];
                    if (contains) adjacent = false;
                }
                if (!adjacent) continue;
                std::vector<Int> c(n);
                for (int i = 0; i < n; ++i) c[i] = s[p] * rays[q][i] - s[q] * rays[p][i];
                next.push_back(primitive(c));
            }
        }
        std::set<std::vector<Int>> uniq;
        for (auto& r : next) uniq.insert(primitive(r));
        rays.assign(uniq.begin(), uniq.end());
    }
    std::sort(rays.begin(), rays.end());
    return rays;
}

std::vector<std::vector<int>> switch_rows(const pclab::TrainTrack& t) {
    std::vector<std::vector<int>> A;
    for (const auto& sw : t.switches) {
        std::vector<int> row(t.num_branches(), 0);
        for (int h : sw.side[0]) row[h / 2] -= 1;
        for (int h : sw.side[1]) row[h / 2] += 1;
        A.push_back(row);
    }
    return A;
}

std::vector<std::vector<int>> floyd(const std::vector<std::vector<int>>& adj) {
    int n = static_cast<int>(adj.size());
    const int inf = 1 << 28;
    std::vector<std::vector<int>> D(n, std::vector<int>(n, inf));
    for (int i = 0; i < n; ++i) {
        D[i][i] = 0;
        for (int j : adj[i]) D[i][j] = 1;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) D[i][j] = std::min(D[i][j], D[i][k] + D[k][j]);
    for (auto& row : D)
        for (int& x : row)
            if (x >= inf) x = -1;
    return D;
}

double brute_delta(const std::vector<std::vector<int>>& adj) {
    auto D = floyd(adj);
    int n = static_cast<int>(adj.size());
    int best = 0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int w = 0; w < n; ++w) {
                    if (x == y || x == z || x == w || y == z || y == w || z == w) continue;
                    int a = D[x][y] + D[z][w], b = D[x][z] + D[y][w], c = D[x][w] + D[y][z];
                    // defect: largest minus middle
                    int hi = std::max({a, b, c}), lo = std::min({a, b, c});
                    int mid = a + b + c - hi - lo;
                    best = std::max(best, hi - mid);
                }
    return best / 2.0;
}

int brute_deviation_paths(const std::vector<std::vector<int>>& adj, int u, int v, int m) {
    auto D = floyd(adj);
    int n = static_cast<int>(adj.size());
    std::vector<char> on(n, 0);
    int best = -1;
    std::function<void(int, int)> dfs = [&](int x, int lo) {
        lo = std::min(lo, D[m][x]);
        if (lo <= best) return;  // cannot improve
        if (x == v) {
            best = lo;
            return;
        }
        on[x] = 1;
        for (int y : adj[x])
            if (!on[y]) dfs(y, lo);
        on[x] = 0;
    };
    dfs(u, 1 << 28);
    return best;
}

int deviation_union_find(const std::vector<std::vector<int>>& adj, int u, int v, int m) {
    auto D = floyd(adj);
    int n = static_cast<int>(adj.size());
    std::vector<int> order(n), parent(n);
    std::iota(order.begin(), order.end(), 0);
    std::iota(parent.begin(), parent.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return D[m][a] > D[m][b]; });
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::vector<char> in(n, 0);
    for (int x : order) {
        in[x] = 1;
        for (int y : adj[x])
            if (in[y]) parent[find(x)] = find(y);
        if (in[u] && in[v] && find(u) == find(v)) return D[m][x];
    }
    return -1;
}

std::vector<std::vector<int>> random_connected_graph(int n, int extra, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::set<std::pair<int, int>> edges;
    for (int i = 1; i < n; ++i) {
        int j = std::uniform_int_distribution<int>(0, i - 1)(rng);
        edges.insert({j, i});
    }
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int k = 0; k < extra; ++k) {
        int a = pick(rng), b = pick(rng);
        if (a != b) edges.insert({std::min(a, b), std::max(a, b)});
    }
    std::vector<std::vector<int>> adj(n);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    return adj;
}

std::vector<std::vector<int>> cycle_graph(int n) {
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i) {
        adj[i].push_back((i + 1) % n);
        adj[i].push_back((i + n - 1) % n);
        std::sort(adj[i].begin(), adj[i].end());
    }
    return adj;
}

std::vector<std::vector<int>> path_graph(int n) {
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i + 1 < n; ++i) {
        adj[i].push_back(i + 1);
        adj[i + 1].push_back(i);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    return adj;
}

std::vector<Int> signature(const pclab::MappingClass& f, const std::vector<pclab::NormalCurve>& probes) {
    std::vector<Int> out;
    for (const auto& p : probes) {
        auto c = pclab::apply(f, p);
        out.insert(out.end(), c.corners.begin(), c.corners.end());
    }
    return out;
}

std::map<std::vector<Int>, Rat> two_step_convolution(const pclab::StepMeasure& mu,
                                                     const std::vector<pclab::NormalCurve>& probes) {
    std::map<std::vector<Int>, Rat> out;
    for (std::size_t i = 0; i < mu.support.size(); ++i)
        for (std::size_t j = 0; j < mu.support.size(); ++j)
            out[signature(mu.support[i] * mu.support[j], probes)] += mu.weights[i] * mu.weights[j];
    return out;
}

int cone_order(int sides) { return sides / 2 - 2; }

}  // namespace oracle
