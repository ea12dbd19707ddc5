#pragma once

#include "pclab/surface.hpp"

#include <functional>
#include <random>

namespace pclab {

// Simple closed curve (or multicurve while under construction) in normal position.
// corners[3t+k] counts arcs of triangle t cutting off corner k.
struct NormalCurve {
    SurfacePtr surface;
    std::vector<Int> corners;

    NormalCurve() = default;
    NormalCurve(SurfacePtr S, std::vector<Int> cc) : surface(std::move(S)), corners(std::move(cc)) {}

    const Triangulation& tri() const { return surface->tri; }
    Int side_weight(int s) const {
        int t = s / 3, k = s % 3;
        return corners[3 * t + k] + corners[3 * t + (k + 1) % 3];
    }
    Int edge_weight(int e) const { return side_weight(tri().sides_of_edge(e)[0]); }
    std::vector<Int> edge_weights() const;
    Int total_weight() const;
    bool same_coordinates(const NormalCurve& o) const {
        return surface->spec == o.surface->spec && corners == o.corners;
    }
    std::size_t hash() const;
};

// Corner counts from edge weights, assuming no vertex-linking components.
std::vector<Int> corners_from_edges(const Triangulation& T, const std::vector<Int>& w);

// Checks matching and realizability; throws InvalidCurve with the violated invariant.
void check_normal(const NormalCurve& c);
// Full invariant check: also connectedness and essentiality (tracing; moderate sizes).
void validate_curve(const NormalCurve& c);
bool is_vertex_link(const NormalCurve& c);
bool is_small(const NormalCurve& c, long limit = 200000);

// Cyclic crossing words of the components (requires small coordinates).
std::vector<Word> trace_components(const NormalCurve& c);
std::vector<NormalCurve> split_components(const NormalCurve& c);

Word inverse_word(const Triangulation& T, const Word& w);
void reduce_free(const Triangulation& T, Word& w);
void reduce_cyclic(const Triangulation& T, Word& w);
// Normal coordinates of the curve with the given closed crossing word (after cyclic reduction).
// Returns all-zero corners when the word reduces to nothing.
NormalCurve curve_from_word(const SurfacePtr& S, Word w);
void add_word_corners(const Triangulation& T, const Word& w, std::vector<Int>& corners);

// Essential simple closed curve with every edge weight <= bound; deterministic in seed.
NormalCurve random_curve(const SurfacePtr& S, std::uint64_t seed, int bound);

// A few canonical short curves (edge weights <= 2) used as generators and probes.
std::vector<NormalCurve> short_curves(const SurfacePtr& S, int max_weight = 2);

}  // namespace pclab

template <>
struct std::hash<pclab::NormalCurve> {
    std::size_t operator()(const pclab::NormalCurve& c) const { return c.hash(); }
};
