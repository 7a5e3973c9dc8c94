#pragma once

#include <optional>

#include "stokeslab/analysis.hpp"

namespace stokeslab {

/// Colliding flow on (-1,1)^2: degree-5 polynomial velocity, f = 0.
ExactSolution colliding_flow();

/// Singular solution on the L-shaped domain with the characteristic r^alpha
/// corner behaviour at the origin, f = 0.
ExactSolution lshape_solution();

/// Strip counterexample on the rhombus: u = 0, piecewise pressure p_eps,
/// strip load f_eps = (1/eps, 0) on |x| <= eps.
ExactSolution rhombus_eps(double eps);

/// u = 0, p(x,y) = x, f = (1,0) on the rhombus.
ExactSolution rhombus_px();

struct ExperimentSpec {
    std::string name;  // colliding-flow | lshape | rhombus-eps | rhombus-px
    std::vector<Method> methods{Method::CR, Method::MINI, Method::P2P0, Method::BR};
    int level_min = 0;
    int level_max = 5;
    std::vector<double> eps_list = {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
    std::string out_dir;  // empty: no files written
    int quad_degree_override = -1;
    bool reference_mode = false;
};

bool known_experiment(const std::string& name);

/// One assemble+solve+measure pass of one method against an exact solution.
struct SolveOutcome {
    DofMap dofmap;
    DiscreteSolution solution;
    SolveReport report;
    long ndof = 0;
    double err_energy = 0.0;
    double err_pressure = 0.0;
    double err_combined = 0.0;  // sqrt(energy^2 + pressure^2)
    double err_sum = 0.0;       // energy + pressure (comparison-chain form)
};

SolveOutcome solve_and_measure(const Triangulation& t, Method m, const ExactSolution& exact,
                               int quad_degree_override = -1);

struct RunResult {
    std::vector<ConvergenceTable> tables;
    std::optional<ChainReport> chain;
    std::vector<std::string> summary_lines;  // "experiment,method,slope,final_error"
};

/// Runs levels x methods, writes CSVs (and a chain report when all four
/// methods are present) into spec.out_dir, returns tables and summaries.
RunResult run(const ExperimentSpec& spec);

/// Significant digits for CSV output (STOKESLAB_CSV_PRECISION overrides; default 12).
int csv_precision();

/// Mesh sequence for an experiment domain, levels 0..level_max.
std::vector<Triangulation> mesh_sequence(Domain d, int level_max);

}  // namespace stokeslab
