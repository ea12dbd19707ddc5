#pragma once

#include "pclab/mcg.hpp"

#include <optional>

namespace pclab {

struct StepMeasure {
    std::vector<MappingClass> support;
    std::vector<Rat> weights;

    // Throws InvalidMeasure unless weights are positive and sum to exactly 1.
    void validate() const;
    static StepMeasure uniform(std::vector<MappingClass> support);
};

// Natural-log entropy -sum p log p.
double entropy(const StepMeasure& mu);

// Curve-graph distance proxy: the exact class {0, 1, 2, 3} when affordable, raised to the
// bound 2 log2 i + 2 beyond distance 2.
double cg_distance_proxy(const NormalCurve& x, const NormalCurve& y);

struct LogMomentReport {
    std::vector<double> distances;  // proxy d(base, g base) per support element
    double plain = 0;               // sum mu(g) max(0, d)
    double logarithmic = 0;         // sum mu(g) log(1 + max(0, d))
};
LogMomentReport log_moment(const StepMeasure& mu, const NormalCurve& base);

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Support indices by inverse CDF over the exact cumulative weights.
std::vector<int> draw_increments(const StepMeasure& mu, int steps, std::uint64_t seed);

struct PathStats {
    std::vector<int> increments;          // g_1 .. g_n
    std::vector<Int> intersections;       // i(c0, w_n c0), n = 0..steps
    std::vector<double> log_intersections;  // log(1 + i)
    std::vector<double> cg_proxy;
    std::vector<std::optional<int>> pc_bound;  // only when the pair is small enough to witness
    int projective_from = 0;                // first step with projective coordinates
    std::vector<std::vector<double>> projective;  // unit-sum edge weights of w_n c0, n >= projective_from
};

struct WalkStats {
    int steps = 0;
    std::uint64_t seed = 0;
    std::vector<PathStats> paths;
};

// Paths w_n = g_1 ... g_n with i.i.d. g_i ~ mu; path p uses derive_seed(seed, p).
// Projective coordinates are kept for the last quarter of steps.
WalkStats sample_paths(const StepMeasure& mu, int steps, int path_count, std::uint64_t seed, const NormalCurve& base,
                       int jobs = 0);

struct ConvergenceReport {
    double epsilon = 0;
    std::vector<double> tail_spread;  // sup-distance diameter of the projective tail per path
    std::vector<char> cauchy;
    double cauchy_fraction = 0;
    std::vector<double> drifts;  // log(1 + i(c0, w_n c0)) / n at the last step
    double median_drift = 0, ci_low = 0, ci_high = 0;
    double direction_dispersion = 0;  // mean pairwise sup-distance of final directions
};

ConvergenceReport convergence_report(const WalkStats& ws, double epsilon, std::uint64_t bootstrap_seed = 1,
                                     int resamples = 2000);

double median(std::vector<double> v);

}  // namespace pclab
