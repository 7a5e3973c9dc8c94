#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "stokeslab/geometry2d.hpp"

namespace stokeslab {

enum class Domain { square, rhombus, lshape, custom };

std::string domain_name(Domain d);
Domain domain_from_name(const std::string& name);
double domain_area(Domain d);

struct Vertex {
    double x = 0.0;
    double y = 0.0;
    Vec2 pos() const { return {x, y}; }
};

/// Vertex indices in counterclockwise order (signed area > 0).
struct Triangle {
    std::array<int, 3> v{};
};

/// Undirected edge with canonical endpoint order a < b.
/// tri[0] is the lower-indexed adjacent triangle; tri[1] == -1 on the boundary.
struct Edge {
    int a = -1;
    int b = -1;
    std::array<int, 2> tri{-1, -1};
    bool boundary = false;
};

/// Conforming triangulation. Immutable after construction; connectivity and
/// validity are established by finalize() which every factory calls.
///
/// Conventions used throughout:
///   - local edge k of a triangle is the edge opposite local vertex k,
///   - edge normals point out of edge.tri[0] (out of the domain on the boundary).
class Triangulation {
  public:
    std::vector<Vertex> vertices;
    std::vector<Triangle> triangles;
    std::vector<Edge> edges;
    Domain domain = Domain::custom;
    int level = 0;

    /// tri_edges[t][k] = global edge opposite local vertex k of triangle t.
    std::vector<std::array<int, 3>> tri_edges;
    std::vector<bool> vertex_on_boundary;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_boundary_edges() const;
    int num_interior_edges() const { return num_edges() - num_boundary_edges(); }

    std::array<Vec2, 3> triangle_coords(int t) const;
    double signed_area(int t) const;

    /// Builds edges and adjacency from the triangle list and validates the mesh
    /// (orientation, conformity via Euler's formula, boundary consistency).
    /// Throws std::runtime_error on an invalid mesh.
    void finalize();
};

Triangulation make_square();
Triangulation make_rhombus();
Triangulation make_lshape();
Triangulation make_domain(Domain d);

/// Splits every triangle into 4 congruent children via edge midpoints.
Triangulation red_refine(const Triangulation& t);

struct TriGeometry {
    double area = 0.0;
    Vec2 centroid;
    double diameter = 0.0;
};

struct EdgeGeometry {
    Vec2 midpoint;
    double length = 0.0;
    Vec2 normal;  // unit, out of edge.tri[0]
};

struct MeshGeometry {
    std::vector<TriGeometry> tri;
    std::vector<EdgeGeometry> edge;
    double total_area = 0.0;
    double max_diameter = 0.0;
};

MeshGeometry geometry(const Triangulation& t);

/// Gradients of the three barycentric coordinates of triangle t.
std::array<Vec2, 3> barycentric_gradients(const Triangulation& t, int tri);

/// Barycentric coordinates of physical point x with respect to triangle t.
std::array<double, 3> barycentric_of(const Triangulation& t, int tri, Vec2 x);

/// Plain-text dump: header "V E T", vertex lines "x y", edge lines
/// "a b boundary", triangle lines "i0 i1 i2"; 17 significant digits.
void dump_mesh(const Triangulation& t, std::ostream& os);
void dump_mesh_file(const Triangulation& t, const std::string& path);
Triangulation load_mesh(std::istream& is);
Triangulation load_mesh_file(const std::string& path);

}  // namespace stokeslab
