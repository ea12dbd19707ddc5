#include "pclab/walk.hpp"

#include "pclab/flips.hpp"
#include "pclab/parallel.hpp"
#include "pclab/predicates.hpp"

#include <cmath>
#include <random>

namespace pclab {

void StepMeasure::validate() const {
    if (support.empty() || support.size() != weights.size()) fail("InvalidMeasure", "support and weights differ in size");
    Rat s = 0;
    for (const Rat& w : weights) {
        if (w <= 0) fail("InvalidMeasure", "weights must be positive");
        s += w;
    }
    if (s != 1) fail("InvalidMeasure", "weights must sum to 1");
}

StepMeasure StepMeasure::uniform(std::vector<MappingClass> support) {
    StepMeasure mu;
    Rat w(1, static_cast<long>(support.size()));
    mu.weights.assign(support.size(), w);
    mu.support = std::move(support);
    return mu;
}

double entropy(const StepMeasure& mu) {
    mu.validate();
    double h = 0;
    for (const Rat& w : mu.weights) {
        double p = w.get_d();
        h -= p * std::log(p);
    }
    return h;
}

namespace {

double log2_int(const Int& v) {
    long exp = 0;
    double m = mpz_get_d_2exp(&exp, v.get_mpz_t());
    return std::log2(m) + static_cast<double>(exp);
}

double log1p_int(const Int& v) { return log2_int(v + 1) * std::log(2.0); }

// Pairs beyond this size get the intersection bound instead of the exact classifier.
const ExplicitLimits kProxyLimits{200000};

}  // namespace

double cg_distance_proxy(const NormalCurve& x, const NormalCurve& y) {
    if (same_curve(x, y)) return 0;
    Int i = geometric_intersection(x, y);
    if (i == 0) return 1;
    double bound = 2 * log2_int(i) + 2;
    if (explicit_feasible(x, y, kProxyLimits)) {
        int cls = cg_distance_class(x, y).value;
        if (cls < 3) return cls;
    }
    return std::max(3.0, bound);
}

LogMomentReport log_moment(const StepMeasure& mu, const NormalCurve& base) {
    mu.validate();
    LogMomentReport r;
    for (std::size_t k = 0; k < mu.support.size(); ++k) {
        double d = std::max(0.0, cg_distance_proxy(base, apply(mu.support[k], base)));
        r.distances.push_back(d);
        r.plain += mu.weights[k].get_d() * d;
        r.logarithmic += mu.weights[k].get_d() * std::log1p(d);
    }
    return r;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 finalizer over the pair
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<int> draw_increments(const StepMeasure& mu, int steps, std::uint64_t seed) {
    mu.validate();
    Int L = 1;
    for (const Rat& w : mu.weights) L = lcm(L, Int(w.get_den()));
    if (!L.fits_ulong_p()) fail("InvalidMeasure", "weight denominators too large to sample exactly");
    std::vector<unsigned long> cum;
    Int acc = 0;
    for (const Rat& w : mu.weights) {
        acc += w.get_num() * (L / w.get_den());
        cum.push_back(acc.get_ui());
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<unsigned long> U(0, L.get_ui() - 1);
    std::vector<int> out;
    for (int n = 0; n < steps; ++n) {
        unsigned long u = U(rng);
        int k = 0;
        while (u >= cum[k]) ++k;
        out.push_back(k);
    }
    return out;
}

namespace {

std::vector<double> projective(const NormalCurve& c) {
    std::vector<Int> w = c.edge_weights();
    Int total = 0;
    for (const Int& x : w) total += x;
    std::vector<double> out;
    for (const Int& x : w) out.push_back(total == 0 ? 0.0 : Rat(x, total).get_d());
    return out;
}

PathStats run_path(const StepMeasure& mu, const std::vector<MappingClass>& inverses, int steps, std::uint64_t seed,
                   const NormalCurve& base) {
    PathStats p;
    p.increments = draw_increments(mu, steps, seed);
    p.projective_from = steps - steps / 4;
    NormalCurve y = base;  // w_n^{-1} c0; i(c0, w_n c0) = i(w_n^{-1} c0, c0)
    for (int n = 0; n <= steps; ++n) {
        if (n > 0) y = apply(inverses[p.increments[n - 1]], y);
        Int i = n == 0 ? Int(0) : geometric_intersection(y, base);
        p.intersections.push_back(i);
        p.log_intersections.push_back(log1p_int(i));
        p.cg_proxy.push_back(n == 0 ? 0.0 : cg_distance_proxy(base, y));
        std::optional<int> pc;
        if (n == 0 || same_curve(y, base)) pc = 0;
        else if (explicit_feasible(y, base, kProxyLimits) && adjacent(y, base, EdgeRule{})) pc = 1;
        p.pc_bound.push_back(pc);
    }
    for (int n = p.projective_from; n <= steps; ++n) {
        NormalCurve x = base;
        for (int k = n - 1; k >= 0; --k) x = apply(mu.support[p.increments[k]], x);
        p.projective.push_back(projective(x));
    }
    return p;
}

}  // namespace

WalkStats sample_paths(const StepMeasure& mu, int steps, int path_count, std::uint64_t seed, const NormalCurve& base,
                       int jobs) {
    if (steps < 1 || path_count < 1) fail("InvalidArgument", "steps and path count must be positive");
    mu.validate();
    std::vector<MappingClass> inverses;
    for (const MappingClass& f : mu.support) inverses.push_back(f.inverse());
    WalkStats ws;
    ws.steps = steps;
    ws.seed = seed;
    ws.paths.resize(path_count);
    parallel_for(path_count, jobs,
                 [&](long p) { ws.paths[p] = run_path(mu, inverses, steps, derive_seed(seed, p), base); });
    return ws;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

namespace {

double sup_distance(const std::vector<double>& x, const std::vector<double>& y) {
    double d = 0;
    for (std::size_t e = 0; e < x.size(); ++e) d = std::max(d, std::fabs(x[e] - y[e]));
    return d;
}

}  // namespace

ConvergenceReport convergence_report(const WalkStats& ws, double epsilon, std::uint64_t bootstrap_seed, int resamples) {
    if (ws.steps < 50) fail("TooShort", "convergence diagnostics need paths of length at least 50");
    ConvergenceReport r;
    r.epsilon = epsilon;
    int good = 0;
    for (const PathStats& p : ws.paths) {
        double spread = 0;
        if (!p.projective.empty()) {
            std::size_t E = p.projective[0].size();
            for (std::size_t e = 0; e < E; ++e) {
                double lo = p.projective[0][e], hi = lo;
                for (const auto& x : p.projective) {
                    lo = std::min(lo, x[e]);
                    hi = std::max(hi, x[e]);
                }
                spread = std::max(spread, hi - lo);
            }
        }
        r.tail_spread.push_back(spread);
        r.cauchy.push_back(spread < epsilon);
        good += spread < epsilon;
        r.drifts.push_back(p.log_intersections.back() / ws.steps);
    }
    r.cauchy_fraction = ws.paths.empty() ? 0 : static_cast<double>(good) / static_cast<double>(ws.paths.size());
    r.median_drift = median(r.drifts);
    std::mt19937_64 rng(bootstrap_seed);
    std::vector<double> meds;
    if (!r.drifts.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, r.drifts.size() - 1);
        for (int b = 0; b < resamples; ++b) {
            std::vector<double> s;
            for (std::size_t i = 0; i < r.drifts.size(); ++i) s.push_back(r.drifts[pick(rng)]);
            meds.push_back(median(std::move(s)));
        }
        std::sort(meds.begin(), meds.end());
        r.ci_low = meds[static_cast<std::size_t>(0.025 * (meds.size() - 1))];
        r.ci_high = meds[static_cast<std::size_t>(0.975 * (meds.size() - 1))];
    }
    double sum = 0;
    long cnt = 0;
    for (std::size_t i = 0; i < ws.paths.size(); ++i)
        for (std::size_t j = i + 1; j < ws.paths.size(); ++j) {
            if (ws.paths[i].projective.empty() || ws.paths[j].projective.empty()) continue;
            sum += sup_distance(ws.paths[i].projective.back(), ws.paths[j].projective.back());
            ++cnt;
        }
    r.direction_dispersion = cnt ? sum / static_cast<double>(cnt) : 0;
    return r;
}

}  // namespace pclab
