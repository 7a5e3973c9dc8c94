#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stokeslab/geometry2d.hpp"
#include "stokeslab/mesh.hpp"

namespace stokeslab {

enum class Method { CR, MINI, P2P0, BR };

std::string method_name(Method m);
Method method_from_name(const std::string& name);
constexpr std::array<Method, 4> all_methods{Method::CR, Method::MINI, Method::P2P0, Method::BR};

/// Polynomial degree of the velocity space (restricted to one triangle).
constexpr int velocity_degree(Method m) {
    switch (m) {
        case Method::CR: return 1;
        case Method::MINI: return 3;
        case Method::P2P0: return 2;
        case Method::BR: return 2;
    }
    return 0;
}

enum class PressureSpace { P0, P1C };

constexpr PressureSpace pressure_space(Method m) {
    return m == Method::MINI ? PressureSpace::P1C : PressureSpace::P0;
}

constexpr int pressure_degree(Method m) { return pressure_space(m) == PressureSpace::P0 ? 0 : 1; }

/// Velocity/pressure degree-of-freedom enumeration for one method on one mesh.
///
/// Velocity numbering (vertices, then edges, then element bubbles; x-block
/// before y-block):
///   CR:    x-component edge dofs [0,E), y-component [E,2E)
///   MINI:  scalar = vertices then bubbles; x [0,V+T), y [V+T,2(V+T))
///   P2P0:  scalar = vertices then edges;  x [0,V+E), y [V+E,2(V+E))
///   BR:    x vertices [0,V), y vertices [V,2V), interior edge bubbles
///          [2V, 2V+E_int) -- one scalar per interior edge, acting on both
///          components through the fixed edge normal.
/// Pressure: P0 = one dof per triangle; P1C = one dof per vertex.
struct DofMap {
    Method method = Method::CR;
    int n_velocity = 0;
    int n_pressure = 0;
    int n_scalar = 0;  // per-component scalar dofs (BR: vertex count)
    std::vector<int> edge_bubble_dof;        // BR only: edge -> dof id or -1
    std::vector<bool> velocity_on_boundary;  // Dirichlet classification
    std::vector<int> interior;               // sorted non-Dirichlet velocity dofs
};

DofMap build_dofmap(const Triangulation& t, Method m);

/// Values and gradients of all local shape functions of one element at one
/// barycentric point. Velocity shape functions are vector fields; gradient
/// rows are components ((grad)_jk = d v_j / d x_k).
struct LocalBasis {
    int n_vel = 0;
    std::array<Vec2, 12> value{};
    std::array<Mat2, 12> grad{};
    int n_pre = 0;
    std::array<double, 3> pvalue{};
};

LocalBasis eval_basis(const Triangulation& t, const MeshGeometry& geom, Method m, int tri,
                      const std::array<double, 3>& bary);
LocalBasis eval_basis(const Triangulation& t, Method m, int tri, const std::array<double, 3>& bary);

/// Global velocity dof ids in the order of LocalBasis velocity functions.
void velocity_element_dofs(const Triangulation& t, const DofMap& dm, int tri, std::vector<int>& out);
/// Global pressure dof ids in the order of LocalBasis pressure values.
void pressure_element_dofs(const Triangulation& t, const DofMap& dm, int tri, std::vector<int>& out);

using BoundaryTrace = std::function<Vec2(Vec2)>;

/// Full-length velocity coefficient vector with only the Dirichlet dofs set:
/// CR uses edge means of g, MINI/BR vertex values, P2P0 vertex and edge
/// midpoint values. edge_quad_degree controls the CR edge-mean quadrature.
std::vector<double> interpolate_boundary(const Triangulation& t, const MeshGeometry& geom, Method m,
                                         const BoundaryTrace& g, int edge_quad_degree = 10);

}  // namespace stokeslab
