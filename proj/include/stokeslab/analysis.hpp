#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stokeslab/assembly.hpp"
#include "stokeslab/solver.hpp"

namespace stokeslab {

/// Callable bundle (u, grad u, p, f, Dirichlet trace). `degree` is the
/// polynomial degree of the velocity (-1 for singular solutions); it selects
/// quadrature orders. p_breaks marks vertical discontinuity lines of p.
struct ExactSolution {
    std::string name;
    Domain domain = Domain::custom;
    std::function<Vec2(Vec2)> u;
    std::function<Mat2(Vec2)> grad_u;
    std::function<double(Vec2)> p;
    SourceField f;
    int degree = 0;  // -1 = singular
    std::vector<double> p_breaks;

    BoundaryTrace dirichlet() const { return u ? BoundaryTrace(u) : nullptr; }
};

/// Velocity value / broken gradient / pressure value of a discrete solution.
Vec2 discrete_velocity(const Triangulation& t, const MeshGeometry& geom, const DofMap& dm,
                       const DiscreteSolution& sol, int tri, const std::array<double, 3>& bary);
Mat2 discrete_velocity_gradient(const Triangulation& t, const MeshGeometry& geom, const DofMap& dm,
                                const DiscreteSolution& sol, int tri,
                                const std::array<double, 3>& bary);
double discrete_pressure(const Triangulation& t, const DofMap& dm, const DiscreteSolution& sol,
                         int tri, const std::array<double, 3>& bary);

int error_quadrature_degree(const ExactSolution& exact, Method m);

/// Broken H1 seminorm || grad_NC (u - u_h) ||.
double energy_error(const Triangulation& t, const DofMap& dm, const DiscreteSolution& sol,
                    const ExactSolution& exact, int quad_degree = -1);
/// || p - p_h || with strip-aware element splitting when p jumps.
double pressure_error(const Triangulation& t, const DofMap& dm, const DiscreteSolution& sol,
                      const ExactSolution& exact, int quad_degree = -1);

/// osc(f,T) = || h_T (f - Pi0 f) ||.
double oscillation(const SourceField& f, const Triangulation& t, int quad_degree = 10);
/// || h_T f ||.
double hf_norm(const SourceField& f, const Triangulation& t, int quad_degree = 10);

/// (|| grad u - Pi0 grad u ||, || p - Pi0 p ||): the best-approximation
/// right-hand side quantities.
std::pair<double, double> best_approx_terms(const ExactSolution& exact, const Triangulation& t,
                                            int quad_degree = 10);

/// || grad u_h - Pi0 grad u_h || of a discrete velocity.
double discrete_grad_pi0_distance(const Triangulation& t, const DofMap& dm,
                                  const DiscreteSolution& sol, int quad_degree = 6);

struct TableRow {
    int level = 0;
    long ndof = 0;
    double err_energy = 0.0;
    double err_pressure = 0.0;
    double err_combined = 0.0;
    double osc = 0.0;
    double hf = 0.0;
};

struct ConvergenceTable {
    std::string experiment;
    Method method = Method::CR;
    std::vector<TableRow> rows;
};

/// Least-squares slope of log(err) vs log(ndof) over the trailing `window`
/// rows (default 3). Throws std::invalid_argument with fewer rows.
double fit_rate(const std::vector<std::pair<double, double>>& ndof_err, int window = 3);
double fit_rate_energy(const ConvergenceTable& table, int window = 3);
double fit_rate_pressure(const ConvergenceTable& table, int window = 3);
double fit_rate_combined(const ConvergenceTable& table, int window = 3);
/// Slope over the leading `window` rows (pre-asymptotic regime).
double fit_rate_pressure_leading(const ConvergenceTable& table, int window);

/// CSV with header level,ndof,err_energy,err_pressure,err_combined,osc,hf.
void write_csv(const ConvergenceTable& table, std::ostream& os, int significant_digits = 12);

/// Per-level inputs of the comparison-chain checker: the four FEM errors in
/// the sum form E = ||grad_NC(u-u_h)|| + ||p-p_h|| plus data terms.
struct ChainLevel {
    int level = 0;
    double e_cr = 0.0, e_mini = 0.0, e_p2 = 0.0, e_br = 0.0;
    double hf = 0.0, osc = 0.0;
    double pi0_p2 = 0.0;  // || grad u_P2 - Pi0 grad u_P2 ||
    double pi0_br = 0.0;
};

struct ChainRatios {
    int level = 0;
    double p2_over_br = 0.0;
    double br_over_cr = 0.0;
    double cr_over_mini = 0.0;  // E_CR / (E_MINI + ||h f||)
    double cr_over_p2 = 0.0;    // E_CR / (E_P2 + osc + pi0 term)
    double cr_over_br = 0.0;
};

struct ChainReport {
    std::string experiment;
    std::vector<ChainLevel> levels;
    std::vector<ChainRatios> ratios;
    double max_ratio = 0.0;
};

ChainReport comparison_chain(const std::string& experiment, const std::vector<ChainLevel>& levels);
void write_chain_report(const ChainReport& rep, std::ostream& os);

}  // namespace stokeslab
