#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "stokeslab/assembly.hpp"

namespace stokeslab {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Velocity coefficients are full length (Dirichlet values included);
/// pressure has exact zero mean through the multiplier constraint.
struct DiscreteSolution {
    Method method = Method::CR;
    Eigen::VectorXd velocity;
    Eigen::VectorXd pressure;
    double multiplier = 0.0;
};

struct SolveReport {
    double relative_residual = 0.0;
    int n_velocity_interior = 0;
    int n_pressure = 0;
    double seconds = 0.0;
};

/// Direct factorization of the symmetric indefinite KKT system
///   [ A  -B^T  0 ] [u]   [ F]
///   [-B   0    c ] [p] = [-G]
///   [ 0  c^T   0 ] [mu]  [ 0].
/// Throws SolverError if the factorization fails or the relative residual
/// exceeds 1e-10.
std::pair<DiscreteSolution, SolveReport> solve(const SaddleSystem& sys);

/// Total number of unknowns actually solved for (interior velocity + pressure).
long solved_dof_count(const SaddleSystem& sys);

}  // namespace stokeslab
