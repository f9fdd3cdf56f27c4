#pragma once

// Triangulation of the annular region between the free boundary Gamma and
// the fixed boundary Sigma: conforming Delaunay triangulation of the two
// loops followed by Ruppert refinement.

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "bernoulli/point.hpp"

namespace bernoulli {

enum class BoundaryTag { Gamma, Sigma };

std::string_view to_string(BoundaryTag tag);
BoundaryTag parse_boundary_tag(std::string_view text);

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  BoundaryTag tag = BoundaryTag::Gamma;
};

// Triangles are counterclockwise. Boundary edges run counterclockwise along
// each loop, so the domain lies to the left of Gamma edges and to the right of
// Sigma edges.
struct Mesh {
  std::vector<Point2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
  double triangle_area(std::size_t t) const;
};

struct MeshOptions {
  // Longest allowed interior edge. Boundary chords keep their sampled length.
  double target_edge_length = 0.1;
  // Optional local bound evaluated at edge midpoints; the smaller of the two
  // bounds applies.
  std::function<double(Point2)> size_field;
  double min_angle_deg = 20.0;
  std::size_t max_steiner_points = 200000;
  // When false, refinement never adds points on the boundary loops: a
  // circumcenter that would encroach a boundary segment is skipped, so the
  // loops keep their input points unless an input point already encroaches.
  bool split_boundary_in_refinement = true;
};

// Input polylines are closed implicitly and may have either orientation; Sigma
// must lie strictly inside Gamma. Input points become nodes 0..|gamma|-1 and
// |gamma|..|gamma|+|sigma|-1 in input order. Throws MeshError.
Mesh triangulate(std::span<const Point2> gamma, std::span<const Point2> sigma,
                 const MeshOptions& options);

// Nodes of the tagged loop in counterclockwise order, starting from the lowest
// node index on the loop. Throws MeshError if the tag does not occur.
std::vector<int> boundary_nodes(const Mesh& mesh, BoundaryTag tag);

struct MeshQuality {
  double min_angle_deg = 0.0;
  double max_edge = 0.0;
  std::size_t triangle_count = 0;
};

// Throws MeshError on an empty mesh.
MeshQuality mesh_quality(const Mesh& mesh);

// Throws MeshError describing the first violated structural invariant:
// positive triangle areas, each boundary edge in exactly one triangle, two
// disjoint closed boundary loops.
void validate_mesh(const Mesh& mesh);

// Same connectivity with node i moved by t * (dx[i], dy[i]).
Mesh displaced(const Mesh& mesh, std::span<const double> dx, std::span<const double> dy, double t);

// Plain-text format: header `V T B`, then V lines `x y`, T lines `i j k`,
// B lines `i j tag` with tag GAMMA or SIGMA. Indices are zero-based.
void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is);

}  // namespace bernoulli
