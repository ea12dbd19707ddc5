#include "pclab/train_track.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

namespace pclab {

namespace {

// Switch matrix: P-side occurrences minus N-side occurrences.
std::vector<std::vector<int>> switch_matrix(const TrainTrack& t) {
    std::vector<std::vector<int>> A(t.num_switches(), std::vector<int>(t.num_branches(), 0));
    for (int s = 0; s < t.num_switches(); ++s)
        for (int x = 0; x < 2; ++x)
            for (int h : t.switches[s].side[x]) A[s][h / 2] += x == 1 ? 1 : -1;
    return A;
}

// Reduced row echelon form of A restricted to cols; returns pivot column positions.
std::vector<int> rref(const std::vector<std::vector<int>>& A, const std::vector<int>& cols,
                      std::vector<std::vector<Rat>>& M) {
    int rows = static_cast<int>(A.size()), n = static_cast<int>(cols.size());
    M.assign(rows, std::vector<Rat>(n));
    for (int r = 0; r < rows; ++r)
        for (int j = 0; j < n; ++j) M[r][j] = A[r][cols[j]];
    std::vector<int> piv;
    int r = 0;
    for (int j = 0; j < n && r < rows; ++j) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (M[i][j] != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(M[p], M[r]);
        Rat inv = 1 / M[r][j];
        for (Rat& x : M[r]) x *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || M[i][j] == 0) continue;
            Rat f = M[i][j];
            for (int k = 0; k < n; ++k) M[i][k] -= f * M[r][k];
        }
        piv.push_back(j);
        ++r;
    }
    return piv;
}

std::vector<std::vector<Rat>> kernel_basis(const std::vector<std::vector<int>>& A, const std::vector<int>& cols) {
    std::vector<std::vector<Rat>> M;
    auto piv = rref(A, cols, M);
    int n = static_cast<int>(cols.size());
    std::vector<char> is_piv(n, 0);
    for (int j : piv) is_piv[j] = 1;
    std::vector<std::vector<Rat>> out;
    for (int f = 0; f < n; ++f) {
        if (is_piv[f]) continue;
        std::vector<Rat> v(n, 0);
        v[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -M[r][f];
        out.push_back(v);
    }
    return out;
}

Weights primitive(const std::vector<Rat>& w) {
    Int l = 1;
    for (const Rat& x : w)
        if (x != 0) l = lcm(l, Int(x.get_den()));
    Weights out(w.size());
    Int g = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        Rat y = w[i] * l;
        out[i] = y.get_num();
        g = gcd(g, out[i]);
    }
    if (g > 1)
        for (Int& x : out) x /= g;
    return out;
}

std::vector<int> support_of(const Weights& w) {
    std::vector<int> s;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] != 0) s.push_back(static_cast<int>(i));
    return s;
}

std::vector<std::vector<int>> state_graph(const TrainTrack& t) {
    int n = 2 * t.num_branches();
    std::vector<std::vector<int>> next(n);
    for (int s = 0; s < n; ++s) {
        HalfPos p = locate(t, 2 * (s / 2) + (1 - s % 2));
        next[s] = t.switches[p.sw].side[1 - p.side];
    }
    return next;
}

}  // namespace

bool is_extreme(const TrainTrack& t, const Weights& w) {
    if (!switch_conditions_hold(t, w)) return false;
    auto S = support_of(w);
    if (S.empty()) return false;
    auto A = switch_matrix(t);
    std::vector<std::vector<Rat>> M;
    return static_cast<int>(rref(A, S, M).size()) == static_cast<int>(S.size()) - 1;
}

std::vector<Weights> extreme_rays(const TrainTrack& t) {
    int B = t.num_branches();
    auto next = state_graph(t);
    auto A = switch_matrix(t);
    std::vector<std::vector<char>> supports;
    std::set<Weights> rays;
    std::vector<int> count(B, 0), path;
    long nodes = 0;
    const long budget = 20000000;
    int used = 0;
    auto strictly_contains_known = [&]() {
        for (const auto& s : supports) {
            bool sub = true;
            int sz = 0;
            for (int b = 0; b < B && sub; ++b) {
                if (s[b]) {
                    ++sz;
                    if (!count[b]) sub = false;
                }
            }
            if (sub && sz < used) return true;
        }
        return false;
    };
    auto same_as_known = [&]() {
        for (const auto& s : supports) {
            bool eq = true;
            for (int b = 0; b < B && eq; ++b) eq = (s[b] != 0) == (count[b] != 0);
            if (eq) return true;
        }
        return false;
    };
    auto record = [&]() {
        if (same_as_known()) return;
        Weights w(B);
        for (int b = 0; b < B; ++b) w[b] = count[b];
        std::vector<Rat> r(w.begin(), w.end());
        Weights p = primitive(r);
        auto S = support_of(p);
        std::vector<std::vector<Rat>> M;
        if (static_cast<int>(rref(A, S, M).size()) != static_cast<int>(S.size()) - 1) return;
        rays.insert(p);
        std::vector<char> mask(B, 0);
        for (int b : S) mask[b] = 1;
        supports.push_back(mask);
    };
    for (int L = 1; L <= 2 * B; ++L) {
        for (int s0 = 0; s0 < 2 * B; ++s0) {
            int b0 = s0 / 2;
            std::function<void(int)> dfs = [&](int s) {
                if (++nodes > budget) fail("ComplexityLimit", "vertex-cycle enumeration budget exceeded");
                int b = s / 2;
                if (count[b] == 2) return;
                if (count[b]++ == 0) ++used;
                path.push_back(s);
                if (!strictly_contains_known()) {
                    int len = static_cast<int>(path.size());
                    if (len == L) {
                        if (std::find(next[s].begin(), next[s].end(), s0) != next[s].end()) record();
                    } else {
                        for (int h : next[s])
                            if (h / 2 >= b0 && h != s0) dfs(h);
                    }
                }
                path.pop_back();
                if (--count[b] == 0) --used;
            };
            dfs(s0);
        }
    }
    std::vector<Weights> out(rays.begin(), rays.end());
    return out;
}

std::vector<NormalCurve> vertex_cycles(const TrainTrack& t) {
    if (!is_recurrent(t)) fail("NotRecurrent", "track admits no positive transverse measure");
    std::vector<NormalCurve> out;
    for (const Weights& w : extreme_rays(t)) out.push_back(reconstruct(t, w));
    return out;
}

bool is_recurrent(const TrainTrack& t) {
    int n = 2 * t.num_branches();
    auto next = state_graph(t);
    // state s lies on a closed train path iff s reaches itself
    std::vector<char> on_cycle(n, 0);
    for (int s0 = 0; s0 < n; ++s0) {
        std::vector<char> seen(n, 0);
        std::deque<int> q;
        for (int h : next[s0])
            if (!seen[h]) {
                seen[h] = 1;
                q.push_back(h);
            }
        while (!q.empty()) {
            int s = q.front();
            q.pop_front();
            for (int h : next[s])
                if (!seen[h]) {
                    seen[h] = 1;
                    q.push_back(h);
                }
        }
        on_cycle[s0] = seen[s0];
    }
    for (int b = 0; b < t.num_branches(); ++b)
        if (!on_cycle[2 * b] && !on_cycle[2 * b + 1]) return false;
    return true;
}

Weights chosen_vertex_ray(const TrainTrack& t) {
    int B = t.num_branches(), n = 2 * B;
    auto next = state_graph(t);
    std::vector<int> best;
    for (int s0 = 0; s0 < n; ++s0) {
        std::vector<int> par(n, -2);
        std::deque<int> q;
        for (int h : next[s0])
            if (par[h] == -2) {
                par[h] = -1;
                q.push_back(h);
            }
        bool found = par[s0] != -2;
        while (!q.empty() && !found) {
            int s = q.front();
            q.pop_front();
            for (int h : next[s])
                if (par[h] == -2) {
                    par[h] = s;
                    if (h == s0) found = true;
                    q.push_back(h);
                }
        }
        if (!found) continue;
        std::vector<int> cyc;
        for (int s = s0;; s = par[s]) {
            cyc.push_back(s);
            if (par[s] < 0) break;
        }
        if (best.empty() || cyc.size() < best.size()) best = cyc;
    }
    if (best.empty()) fail("NotRecurrent", "track has no closed train path");
    std::vector<Rat> w(B, 0);
    for (int s : best) w[s / 2] += 1;
    auto A = switch_matrix(t);
    for (;;) {
        std::vector<int> S;
        for (int b = 0; b < B; ++b)
            if (w[b] != 0) S.push_back(b);
        auto K = kernel_basis(A, S);
        if (K.size() <= 1) break;
        std::vector<Rat> z;
        for (const auto& k : K) {
            // parallel to w restricted to S?
            Rat ratio = 0;
            bool par = true;
            for (std::size_t i = 0; i < S.size() && par; ++i) {
                Rat r = k[i] / w[S[i]];
                if (i == 0) ratio = r;
                else if (r != ratio) par = false;
            }
            if (!par) {
                z = k;
                break;
            }
        }
        bool neg = false;
        for (const Rat& x : z) neg = neg || x < 0;
        if (!neg)
            for (Rat& x : z) x = -x;
        Rat step = -1;
        for (std::size_t i = 0; i < S.size(); ++i) {
            if (z[i] >= 0) continue;
            Rat r = w[S[i]] / (-z[i]);
            if (step < 0 || r < step) step = r;
        }
        for (std::size_t i = 0; i < S.size(); ++i) w[S[i]] += step * z[i];
    }
    return primitive(w);
}

NormalCurve chosen_vertex_cycle(const TrainTrack& t) { return reconstruct(t, chosen_vertex_ray(t)); }

}  // namespace pclab
