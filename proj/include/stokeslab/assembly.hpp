#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <memory>
#include <vector>

#include "stokeslab/mesh.hpp"
#include "stokeslab/quadrature.hpp"
#include "stokeslab/spaces.hpp"

namespace stokeslab {

/// Right-hand side field. `degree` is the polynomial degree used to choose the
/// assembly quadrature (negative = not polynomial, integrate at max degree);
/// `x_breaks` marks vertical lines across which f jumps, handled by exact
/// element splitting. An element-wise variant overrides the plain callable
/// (used for piecewise-constant projected loads).
struct SourceField {
    std::function<Vec2(Vec2)> f;
    int degree = 0;
    std::vector<double> x_breaks;
    std::function<Vec2(int, Vec2)> f_elem;

    Vec2 eval(int tri, Vec2 x) const { return f_elem ? f_elem(tri, x) : f(x); }
    bool is_zero() const { return !f && !f_elem; }
};

inline SourceField zero_source() { return SourceField{nullptr, 0, {}, nullptr}; }

struct LocalMatrices {
    Eigen::MatrixXd stiffness;     // n_vel x n_vel
    Eigen::MatrixXd div_coupling;  // n_pre x n_vel, entries int_T q div v
    Eigen::VectorXd load;          // n_vel
};

LocalMatrices local_matrices(const Triangulation& t, const MeshGeometry& geom, Method m, int tri,
                             const SourceField& f, int quad_degree);

/// Saddle-point system after Dirichlet elimination by lifting:
///   A u - B^T p = F,  B u = -G,  c . p = 0.
/// B keeps the positive divergence sign (row q applied to v is int q div v).
struct SaddleSystem {
    Method method;
    DofMap dofmap;
    Eigen::SparseMatrix<double> A;  // interior x interior
    Eigen::SparseMatrix<double> B;  // pressure x interior
    Eigen::VectorXd F;              // interior load, lifting applied
    Eigen::VectorXd G;              // pressure-block contribution of the lifting
    Eigen::VectorXd c;              // integrals of the pressure basis functions
    Eigen::VectorXd g_lift;         // full-length boundary coefficient vector
};

/// Quadrature degree used by assemble() for method m and source f.
int assembly_quadrature_degree(Method m, const SourceField& f);

SaddleSystem assemble(const Triangulation& t, Method m, const SourceField& f, const BoundaryTrace& g,
                      int quad_degree_override = -1);

}  // namespace stokeslab
