#pragma once

#include <random>

#include "stokeslab/companions.hpp"
#include "stokeslab/experiments.hpp"
#include "stokeslab/pseudostress.hpp"

namespace stokeslab {

/// Random field in the homogeneous CR space (boundary dofs zero), scalar
/// (size E) or stacked vector (size 2E) depending on `vector_field`.
Eigen::VectorXd random_cr_field(const Triangulation& t, std::mt19937& rng, bool vector_field = false);

/// Random polynomial vector field of total degree <= max_degree with
/// coefficients in [-1,1], together with its analytic gradient.
struct PolynomialField {
    int max_degree = 5;
    std::vector<double> cx, cy;  // coefficients for monomials x^a y^b, a+b <= max_degree
    Vec2 value(Vec2 p) const;
    Mat2 gradient(Vec2 p) const;
};
PolynomialField random_polynomial_field(std::mt19937& rng, int max_degree = 5);

/// |mean(b_E) - 1| and |mean(b_T) - 1| for the normalized bubbles.
std::pair<double, double> bubble_normalization_errors();

/// Companion conservation/stability properties over random CR fields on one mesh.
struct CompanionCheck {
    double max_conservation_residual = 0.0;  // scaled by ||grad_NC v|| |T|
    double max_mean_residual = 0.0;          // scaled by ||grad_NC v|| |T|
    double max_stability_constant = 0.0;     // ||h^-1 (v - J_k v)|| / ||grad_NC v||, k in {1,2,3}
};
CompanionCheck check_companions(const Triangulation& t, int n_fields, unsigned seed);

/// max over elements of | grad_NC I_NC v - Pi0 grad v | for one field.
double inc_identity_residual(const Triangulation& t, const std::function<Vec2(Vec2)>& v,
                             const std::function<Mat2(Vec2)>& grad_v, int quad_degree);

struct EpsSweepEntry {
    double eps = 0.0;
    double cr_velocity_max = 0.0;  // max |coefficient| of u_CR
    double cr_pressure_pos = 0.0;  // p_CR on the x >= 0 triangle
    double cr_pressure_err = 0.0;  // || p_eps - p_CR ||
    double mini_pressure_err = 0.0;
};
std::vector<EpsSweepEntry> counterexample_eps_sweep(const std::vector<double>& eps_list);

struct PxReport {
    double mini_velocity_max = 0.0;   // max |coefficient| of u_MINI
    double mini_pressure_err = 0.0;   // || x - p_MINI ||
    double cr_pressure_err = 0.0;     // || x - p_CR ||
    double p2_pressure_err = 0.0;
    double br_pressure_err = 0.0;
    double x_pi0_distance = 0.0;      // || x - Pi0 x || (oracle 1/3)
};
PxReport counterexample_px_report();

struct PseudostressLevel {
    int level = 0;
    double lhs = 0.0;  // ||grad u - dev sigma|| + ||p + tr sigma/2||
    double rhs = 0.0;  // ||grad_NC(u - u_CR)|| + ||p - p_CR||
    double osc = 0.0;
    double hf = 0.0;
    double c_forward = 0.0;   // lhs / (rhs + osc)
    double c_backward = 0.0;  // rhs / (lhs + hf)
    double trace_integral = 0.0;
    double tilde_distance = 0.0;  // ||grad_NC(u_CR - u~_CR)||
};
std::vector<PseudostressLevel> pseudostress_sweep(const ExactSolution& exact, int level_max);

struct DivergenceCheck {
    double max_cr_pointwise = 0.0;   // max_T |div_NC u_CR|
    double max_mean_p0 = 0.0;        // max_T |int_T div u_h| / |T| over P2P0 and BR
};
DivergenceCheck check_divergence(const Triangulation& t, const ExactSolution& exact);

/// Consistency of an exact-solution triple: max of |div u| (analytic gradient)
/// and |-Lap u + grad p - f| (finite differences) over random interior points.
struct ConsistencyCheck {
    double max_div = 0.0;
    double max_momentum_residual = 0.0;
};
ConsistencyCheck check_exact_consistency(const ExactSolution& exact, int n_points, unsigned seed);

}  // namespace stokeslab
