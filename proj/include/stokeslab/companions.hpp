#pragma once

#include <Eigen/Dense>
#include <functional>

#include "stokeslab/mesh.hpp"
#include "stokeslab/quadrature.hpp"

namespace stokeslab {

// Scalar Crouzeix-Raviart fields are coefficient vectors indexed by edges
// (dof = value at the edge midpoint = mean over the edge). Vector fields
// stack the two components: x block [0,E), y block [E,2E).

/// Continuous piecewise polynomial companion of a CR field, stored in the
/// constructive split of its definition: P1 vertex values (zero on the
/// boundary), coefficients of the interior edge bubbles b_E = 6 phi_a phi_b,
/// and coefficients of the element bubbles b_T = 60 phi_a phi_b phi_c.
struct CompanionField {
    int k = 1;  // polynomial degree 1, 2 or 3
    Eigen::VectorXd vertex;       // size V
    Eigen::VectorXd edge_bubble;  // size E, zero unless k >= 2 and edge interior
    Eigen::VectorXd elem_bubble;  // size T, zero unless k == 3

    double value(const Triangulation& t, int tri, const std::array<double, 3>& bary) const;
    Vec2 gradient(const Triangulation& t, int tri, const std::array<double, 3>& bary) const;
};

double cr_value(const Triangulation& t, int tri, const std::array<double, 3>& bary,
                const Eigen::VectorXd& cr);
/// Elementwise (broken) gradient of a scalar CR field; constant per triangle.
Vec2 cr_gradient(const Triangulation& t, int tri, const Eigen::VectorXd& cr);

/// Elementwise L2 projection onto piecewise constants.
template <typename T>
std::vector<T> pi0(const Triangulation& t, const std::function<T(Vec2)>& field, int quad_degree = 10,
                   const std::vector<double>& x_breaks = {}) {
    const MeshGeometry g = geometry(t);
    const TriRule& rule = triangle_rule(quad_degree);
    std::vector<T> out(t.num_triangles());
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        out[tri] = integrate_triangle_split<T>(t.triangle_coords(tri), field, rule, x_breaks) *
                   (1.0 / g.tri[tri].area);
    }
    return out;
}

/// Non-conforming interpolation: CR dof on every edge is the edge mean of v.
Eigen::VectorXd inc_interpolate(const Triangulation& t, const std::function<Vec2(Vec2)>& v,
                                int edge_quad_degree = 10);

CompanionField j1(const Triangulation& t, const Eigen::VectorXd& cr);
CompanionField j2(const Triangulation& t, const Eigen::VectorXd& cr);
CompanionField j3(const Triangulation& t, const Eigen::VectorXd& cr);

struct VectorCompanionField {
    CompanionField x, y;
};
VectorCompanionField j1_vec(const Triangulation& t, const Eigen::VectorXd& cr_vec);
VectorCompanionField j2_vec(const Triangulation& t, const Eigen::VectorXd& cr_vec);
VectorCompanionField j3_vec(const Triangulation& t, const Eigen::VectorXd& cr_vec);

// Norms and per-element integrals used by the companion property checks.
double norm_grad_nc(const Triangulation& t, const Eigen::VectorXd& cr);
double norm_grad_diff(const Triangulation& t, const Eigen::VectorXd& cr, const CompanionField& J);
double norm_companion_grad(const Triangulation& t, const CompanionField& J);
/// || h_T^{-1} (v - J v) ||
double norm_scaled_diff(const Triangulation& t, const Eigen::VectorXd& cr, const CompanionField& J);
/// int_T grad_NC(v - J v) dx
Vec2 integral_grad_diff(const Triangulation& t, int tri, const Eigen::VectorXd& cr,
                        const CompanionField& J);
/// int_T (v - J v) dx
double integral_diff(const Triangulation& t, int tri, const Eigen::VectorXd& cr,
                     const CompanionField& J);

}  // namespace stokeslab
