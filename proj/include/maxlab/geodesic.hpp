#pragma once

#include <array>
#include <memory>
#include <vector>

#include "maxlab/area_functional.hpp"
#include "maxlab/chart_metric.hpp"
#include "maxlab/maximal_solver.hpp"

namespace maxlab {

/// Triangulation of the graph: every active grid cell split along its
/// lower-left to upper-right diagonal. Edge lengths are induced lengths of the
/// chart segments, sqrt(exp(2 lambda(mid)) |dx|^2 - (du)^2), i.e. the
/// one-point midpoint rule with the exact increment of the piecewise linear
/// graph.
struct TriMesh {
    std::shared_ptr<const Domain> domain;
    std::vector<std::array<int, 3>> triangles;
    /// edge_length[t][k] is the length of the edge opposite local vertex k.
    std::vector<std::array<double, 3>> edge_length;
    std::vector<double> area;
    /// Vertex -> incident triangles (CSR).
    std::vector<int> vertex_offsets;
    std::vector<int> vertex_triangles;

    std::size_t vertex_count() const { return vertex_offsets.size() - 1; }
    bool has_vertex(int v) const { return vertex_offsets[v + 1] > vertex_offsets[v]; }
};

/// Throws MeshError for degenerate edges or triangle-inequality violations.
TriMesh triangulate(const GraphFunction& g, const MetricSpec& metric, Exec exec = Exec::parallel);

/// Geodesic distance from one source vertex; unreachable vertices are +inf.
struct DistanceField {
    int source = -1;
    std::vector<double> distance;
};

/// Fast marching over the triangles. Each trial vertex is updated along
/// edges (Dijkstra) and, when the opposite edge of a triangle has both ends
/// accepted, from the virtual point source reconstructed by unfolding that
/// triangle; the triangle update is used only when the straight ray from the
/// virtual source enters the vertex through the opposite edge.
DistanceField geodesic_distance(const TriMesh& mesh, int source);

/// Length of the edge between two vertices of a triangle, or -1.
double edge_length_between(const TriMesh& mesh, int triangle, int v0, int v1);

struct ClippedTriangle {
    int triangle = -1;
    double fraction = 1.0;  // area fraction with d <= r (linear interpolation)
};

struct BoundaryPoint {
    int v0 = -1;
    int v1 = -1;
    double t = 0.0;  // position along v0 -> v1
    double x = 0.0;  // chart coordinates
    double y = 0.0;
};

/// Geodesic disc D(p, r) of a distance field and its circle.
struct GeodesicDisc {
    int center = -1;
    double radius = 0.0;
    std::vector<ClippedTriangle> triangles;
    /// Vertices of every triangle meeting the disc (sorted).
    std::vector<int> vertices;
    /// Closed boundary polylines (level set d = r), one per component.
    std::vector<std::vector<BoundaryPoint>> boundary;
    double length = 0.0;  // L(r), induced length of all boundary components
    double area = 0.0;
    bool multi_component = false;
};

/// Extracts D(p, r). Every vertex of a triangle meeting the disc must have
/// depth >= `min_depth` (fields are defined there), otherwise ContainmentError.
GeodesicDisc disc_extract(const TriMesh& mesh, const DistanceField& field, double r, int min_depth = 2);

/// sum over clipped triangles of mean(vertex values) * area * fraction
double disc_integral(const TriMesh& mesh, const GeodesicDisc& disc, const std::vector<double>& values);

/// Smallest distance to a mesh vertex of depth < min_depth: discs of smaller
/// radius have a chance to be compactly contained.
double containment_radius(const TriMesh& mesh, const DistanceField& field, int min_depth = 2);

}  // namespace maxlab
