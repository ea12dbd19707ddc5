#pragma once

#include "pclab/base.hpp"

#include <array>
#include <memory>

namespace pclab {

struct SurfaceSpec {
    int genus = 0;
    int punctures = 0;
    bool operator==(const SurfaceSpec&) const = default;
    int euler() const { return 2 - 2 * genus; }
    bool closed() const { return punctures == 0; }
};

// Oriented occurrence of an edge inside a triangle.
struct Side {
    int edge = 0;
    bool fwd = true;  // agrees with the edge's own orientation
    bool operator==(const Side&) const = default;
};

// Triangles as ccw triples of oriented edges. Side id s = 3*t + k is side k of
// triangle t, running from corner k to corner k+1; corner k sits between sides k-1 and k.
class Triangulation {
public:
    Triangulation() = default;
    explicit Triangulation(std::vector<std::array<Side, 3>> tris);

    int num_triangles() const { return static_cast<int>(tris_.size()); }
    int num_edges() const { return num_edges_; }
    int num_vertices() const { return num_vertices_; }
    int num_sides() const { return 3 * num_triangles(); }

    const std::array<Side, 3>& triangle(int t) const { return tris_[t]; }
    const std::vector<std::array<Side, 3>>& triangles() const { return tris_; }
    Side side(int s) const { return tris_[s / 3][s % 3]; }
    int edge_of(int s) const { return side(s).edge; }
    int partner(int s) const { return partner_[s]; }
    // The two sides of edge e: [0] traverses e forwards, [1] backwards.
    std::array<int, 2> sides_of_edge(int e) const { return edge_sides_[e]; }
    int corner_vertex(int corner) const { return corner_vertex_[corner]; }
    bool flippable(int e) const;

    // e' = diagonal of the quad around e; returns the flipped triangulation.
    Triangulation flipped(int e) const;

    bool operator==(const Triangulation& o) const { return tris_ == o.tris_; }

private:
    std::vector<std::array<Side, 3>> tris_;
    std::vector<int> partner_;
    std::vector<std::array<int, 2>> edge_sides_;
    std::vector<int> corner_vertex_;
    int num_edges_ = 0;
    int num_vertices_ = 0;
};

// Triangulated surface. Vertices are punctures, except the single marked vertex of a
// closed surface.
struct Surface {
    SurfaceSpec spec;
    Triangulation tri;
    std::vector<bool> vertex_is_puncture;
    std::string tag = "canonical-v1";

    int puncture_count() const;
};

using SurfacePtr = std::shared_ptr<const Surface>;

// Canonical triangulation for (g, m); cached, deterministic.
SurfacePtr build_surface(int genus, int punctures);
inline SurfacePtr build_surface(SurfaceSpec s) { return build_surface(s.genus, s.punctures); }

}  // namespace pclab
