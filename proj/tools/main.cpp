#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "stokeslab/checks.hpp"
#include "stokeslab/experiments.hpp"

using namespace stokeslab;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

std::vector<Method> parse_methods(const std::string& csv) {
    std::vector<Method> out;
    std::string token;
    std::stringstream ss(csv);
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) out.push_back(method_from_name(token));
    }
    if (out.empty()) throw std::invalid_argument("no methods given");
    return out;
}

std::pair<int, int> parse_levels(const std::string& range) {
    const auto pos = range.find("..");
    if (pos == std::string::npos) {
        const int l = std::stoi(range);
        return {l, l};
    }
    const int a = std::stoi(range.substr(0, pos));
    const int b = std::stoi(range.substr(pos + 2));
    if (a < 0 || b < a) throw std::invalid_argument("bad level range: " + range);
    return {a, b};
}

int cmd_run(const std::string& experiment, const std::string& methods, const std::string& levels,
            const std::vector<double>& eps, const std::string& out_dir, int quad_degree,
            bool reference_mode, bool chain_to_stdout) {
    ExperimentSpec spec;
    spec.name = experiment;
    if (!known_experiment(spec.name)) {
        std::cerr << "unknown experiment: " << spec.name << "\n";
        return kExitUsage;
    }
    try {
        spec.methods = parse_methods(methods);
        std::tie(spec.level_min, spec.level_max) = parse_levels(levels);
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (spec.level_max > 8) {
        std::cerr << "usage error: level cap is 8\n";
        return kExitUsage;
    }
    if (!eps.empty()) spec.eps_list = eps;
    spec.out_dir = out_dir;
    spec.quad_degree_override = quad_degree;
    spec.reference_mode = reference_mode;

    try {
        const RunResult r = run(spec);
        for (const auto& line : r.summary_lines) std::cout << line << "\n";
        if (r.chain && chain_to_stdout) write_chain_report(*r.chain, std::cout);
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    }
    return 0;
}

bool report(const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %-30s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    return ok;
}

int cmd_verify() {
    bool all = true;
    char buf[256];

    const auto [be, bt] = bubble_normalization_errors();
    std::snprintf(buf, sizeof buf, "|mean(b_E)-1|=%.2e |mean(b_T)-1|=%.2e", be, bt);
    all &= report("bubble normalization", be <= 1e-13 && bt <= 1e-13, buf);

    for (Domain d : {Domain::square, Domain::rhombus, Domain::lshape}) {
        Triangulation t = make_domain(d);
        CompanionCheck worst;
        for (int level = 0; level <= 3; ++level) {
            if (level > 0) t = red_refine(t);
            const CompanionCheck c = check_companions(t, 100, 20240000u + 7u * level);
            worst.max_conservation_residual =
                std::max(worst.max_conservation_residual, c.max_conservation_residual);
            worst.max_mean_residual = std::max(worst.max_mean_residual, c.max_mean_residual);
            worst.max_stability_constant =
                std::max(worst.max_stability_constant, c.max_stability_constant);
        }
        std::snprintf(buf, sizeof buf, "%s L0..3 cons=%.2e mean=%.2e stab=%.2f",
                      domain_name(d).c_str(), worst.max_conservation_residual,
                      worst.max_mean_residual, worst.max_stability_constant);
        all &= report("companion conservation", worst.max_conservation_residual <= 1e-10 &&
                                                    worst.max_mean_residual <= 1e-10 &&
                                                    worst.max_stability_constant < 10.0,
                      buf);
    }

    {
        const ExactSolution ex = colliding_flow();
        Triangulation t = make_square();
        double worst = 0.0;
        for (int level = 0; level <= 2; ++level) {
            if (level > 0) t = red_refine(t);
            worst = std::max(worst, inc_identity_residual(t, ex.u, ex.grad_u, 10));
        }
        std::mt19937 rng(7);
        const Triangulation t1 = red_refine(make_square());
        for (int s = 0; s < 20; ++s) {
            const PolynomialField f = random_polynomial_field(rng, 5);
            worst = std::max(worst, inc_identity_residual(
                                        t1, [&f](Vec2 p) { return f.value(p); },
                                        [&f](Vec2 p) { return f.gradient(p); }, 12));
        }
        std::snprintf(buf, sizeof buf, "max residual %.2e", worst);
        all &= report("grad_NC I_NC = Pi0 grad", worst <= 1e-10, buf);
    }

    {
        const auto sweep = counterexample_eps_sweep({0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625});
        bool ok = true;
        double max_u = 0.0, prev = 1e300, min_mini = 1e300;
        for (const auto& e : sweep) {
            max_u = std::max(max_u, e.cr_velocity_max);
            ok &= e.cr_pressure_err < prev;
            prev = e.cr_pressure_err;
            min_mini = std::min(min_mini, e.mini_pressure_err);
        }
        ok &= max_u <= 1e-10 && min_mini > 0.15;
        std::snprintf(buf, sizeof buf, "|u_CR|=%.1e, ||p_eps-p_CR|| decreasing, min mini err %.3f",
                      max_u, min_mini);
        all &= report("strip counterexample", ok, buf);
    }

    {
        const PxReport r = counterexample_px_report();
        const bool ok = r.mini_velocity_max <= 1e-10 && r.mini_pressure_err <= 1e-10 &&
                        r.cr_pressure_err > 0.1 && r.p2_pressure_err > 0.1 && r.br_pressure_err > 0.1;
        std::snprintf(buf, sizeof buf, "mini err %.1e; cr/p2/br %.3f/%.3f/%.3f (||x-Pi0 x||=%.3f)",
                      r.mini_pressure_err, r.cr_pressure_err, r.p2_pressure_err, r.br_pressure_err,
                      r.x_pi0_distance);
        all &= report("p=x counterexample", ok, buf);
    }

    {
        const auto sweep = pseudostress_sweep(colliding_flow(), 3);
        double worst_trace = 0.0, worst_c = 0.0;
        for (const auto& pl : sweep) {
            worst_trace = std::max(worst_trace, std::abs(pl.trace_integral));
            worst_c = std::max({worst_c, pl.c_forward, pl.c_backward});
        }
        std::snprintf(buf, sizeof buf, "max |int tr|=%.1e, max constant %.2f", worst_trace, worst_c);
        all &= report("pseudostress identities", worst_trace <= 1e-10 && worst_c < 10.0, buf);
    }

    {
        const ExactSolution ex = colliding_flow();
        Triangulation t = make_square();
        DivergenceCheck worst;
        for (int level = 0; level <= 2; ++level) {
            if (level > 0) t = red_refine(t);
            const DivergenceCheck c = check_divergence(t, ex);
            worst.max_cr_pointwise = std::max(worst.max_cr_pointwise, c.max_cr_pointwise);
            worst.max_mean_p0 = std::max(worst.max_mean_p0, c.max_mean_p0);
        }
        std::snprintf(buf, sizeof buf, "max |div_NC u_CR|=%.1e, max |int_T div u_h|=%.1e",
                      worst.max_cr_pointwise, worst.max_mean_p0);
        all &= report("divergence constraints",
                      worst.max_cr_pointwise <= 1e-10 && worst.max_mean_p0 <= 1e-10, buf);
    }

    for (const auto& make : {colliding_flow, lshape_solution}) {
        const ExactSolution ex = make();
        const ConsistencyCheck c = check_exact_consistency(ex, 100, 555);
        std::snprintf(buf, sizeof buf, "%s div=%.1e mom=%.1e", ex.name.c_str(), c.max_div,
                      c.max_momentum_residual);
        all &= report("exact-solution consistency",
                      c.max_div <= 1e-10 && c.max_momentum_residual <= 1e-6, buf);
    }

    std::printf("verify: %s\n", all ? "all property suites passed" : "FAILURES above");
    return all ? 0 : 1;
}

int cmd_mesh(const std::string& domain, int level, const std::string& dump) {
    Triangulation t;
    try {
        t = make_domain(domain_from_name(domain));
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    for (int l = 0; l < level; ++l) t = red_refine(t);
    if (!dump.empty()) {
        dump_mesh_file(t, dump);
    } else {
        dump_mesh(t, std::cout);
    }
    std::fprintf(stderr, "%s level %d: V=%d E=%d T=%d\n", domain.c_str(), level, t.num_vertices(),
                 t.num_edges(), t.num_triangles());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stokeslab - first-order mixed FEM laboratory for the 2D Stokes equations"};
    app.require_subcommand(1);

    std::string experiment, methods = "cr,mini,p2p0,br", levels = "0..5", out_dir;
    std::vector<double> eps;
    int quad_degree = -1;
    bool reference_mode = false;

    auto* run_cmd = app.add_subcommand("run", "run an experiment and emit per-method CSV tables");
    run_cmd->add_option("--experiment", experiment, "colliding-flow | lshape | rhombus-eps | rhombus-px")
        ->required();
    run_cmd->add_option("--methods", methods, "comma list of cr,mini,p2p0,br");
    run_cmd->add_option("--levels", levels, "level range A..B (default 0..5)");
    run_cmd->add_option("--eps", eps, "epsilon list for rhombus-eps");
    run_cmd->add_option("--out", out_dir, "output directory for CSV files");
    run_cmd->add_option("--quad-degree", quad_degree, "override assembly quadrature degree");
    run_cmd->add_flag("--reference-mode", reference_mode, "single-threaded deterministic execution");

    std::string cmp_experiment, cmp_levels = "0..4";
    auto* cmp_cmd = app.add_subcommand("compare", "run all four methods and print the chain report");
    cmp_cmd->add_option("--experiment", cmp_experiment, "colliding-flow | lshape")->required();
    cmp_cmd->add_option("--levels", cmp_levels, "level range A..B");
    cmp_cmd->add_flag("--reference-mode", reference_mode, "single-threaded deterministic execution");

    auto* verify_cmd = app.add_subcommand("verify", "run the invariant and property suites");

    std::string mesh_domain = "square", mesh_dump;
    int mesh_level = 0;
    auto* mesh_cmd = app.add_subcommand("mesh", "build and dump a triangulation");
    mesh_cmd->add_option("--domain", mesh_domain, "square | rhombus | lshape");
    mesh_cmd->add_option("--level", mesh_level, "red refinement level");
    mesh_cmd->add_option("--dump", mesh_dump, "output file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(experiment, methods, levels, eps, out_dir, quad_degree, reference_mode,
                           false);
        }
        if (cmp_cmd->parsed()) {
            if (cmp_experiment != "colliding-flow" && cmp_experiment != "lshape") {
                std::cerr << "compare needs a convergence experiment (colliding-flow | lshape)\n";
                return kExitUsage;
            }
            return cmd_run(cmp_experiment, "cr,mini,p2p0,br", cmp_levels, {}, "", -1, reference_mode,
                           true);
        }
        if (verify_cmd->parsed()) return cmd_verify();
        if (mesh_cmd->parsed()) return cmd_mesh(mesh_domain, mesh_level, mesh_dump);
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
