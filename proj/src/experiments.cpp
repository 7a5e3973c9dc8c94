#include "stokeslab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace stokeslab {

ExactSolution colliding_flow() {
    ExactSolution ex;
    ex.name = "colliding-flow";
    ex.domain = Domain::square;
    ex.degree = 5;
    ex.u = [](Vec2 v) {
        const double x = v.x, y = v.y;
        return Vec2{20.0 * x * y * y * y * y - 4.0 * std::pow(x, 5),
                    20.0 * x * x * x * x * y - 4.0 * std::pow(y, 5)};
    };
    ex.grad_u = [](Vec2 v) {
        const double x = v.x, y = v.y;
        const double x4 = x * x * x * x, y4 = y * y * y * y;
        return Mat2{20.0 * y4 - 20.0 * x4, 80.0 * x * y * y * y, 80.0 * x * x * x * y,
                    20.0 * x4 - 20.0 * y4};
    };
    ex.p = [](Vec2 v) {
        const double x = v.x, y = v.y;
        return 120.0 * x * x * y * y - 20.0 * std::pow(x, 4) - 20.0 * std::pow(y, 4) - 32.0 / 6.0;
    };
    ex.f = zero_source();
    return ex;
}

namespace {

// Angular profile of the corner singularity and its derivatives.
struct LshapeW {
    static constexpr double alpha = 0.54448373;
    static constexpr double omega = 3.0 * std::numbers::pi / 2.0;
    double cao = std::cos(alpha * omega);

    double w(double t) const {
        return std::sin((1 + alpha) * t) * cao / (1 + alpha) - std::cos((1 + alpha) * t) -
               std::sin((1 - alpha) * t) * cao / (1 - alpha) + std::cos((1 - alpha) * t);
    }
    double w1(double t) const {
        return cao * std::cos((1 + alpha) * t) + (1 + alpha) * std::sin((1 + alpha) * t) -
               cao * std::cos((1 - alpha) * t) - (1 - alpha) * std::sin((1 - alpha) * t);
    }
    double w2(double t) const {
        return -cao * (1 + alpha) * std::sin((1 + alpha) * t) +
               (1 + alpha) * (1 + alpha) * std::cos((1 + alpha) * t) +
               cao * (1 - alpha) * std::sin((1 - alpha) * t) -
               (1 - alpha) * (1 - alpha) * std::cos((1 - alpha) * t);
    }
    double w3(double t) const {
        const double a1 = 1 + alpha, a2 = 1 - alpha;
        return -cao * a1 * a1 * std::cos(a1 * t) - a1 * a1 * a1 * std::sin(a1 * t) +
               cao * a2 * a2 * std::cos(a2 * t) + a2 * a2 * a2 * std::sin(a2 * t);
    }

    // Angle measured from the positive x axis, mapped into [0, 3pi/2].
    static double angle(Vec2 v) {
        double t = std::atan2(v.y, v.x);
        if (t < 0.0) t += 2.0 * std::numbers::pi;
        return t;
    }
};

}  // namespace

ExactSolution lshape_solution() {
    ExactSolution ex;
    ex.name = "lshape";
    ex.domain = Domain::lshape;
    ex.degree = -1;
    const LshapeW W;
    const double a = LshapeW::alpha;

    ex.u = [W, a](Vec2 v) {
        const double r = v.norm();
        if (r == 0.0) return Vec2{0.0, 0.0};
        const double t = LshapeW::angle(v);
        const double ra = std::pow(r, a);
        const double w = W.w(t), w1 = W.w1(t);
        return Vec2{ra * ((1 + a) * std::sin(t) * w + std::cos(t) * w1),
                    ra * (-(1 + a) * std::cos(t) * w + std::sin(t) * w1)};
    };
    ex.grad_u = [W, a](Vec2 v) {
        const double r = v.norm();
        const double t = LshapeW::angle(v);
        const double ram1 = std::pow(r, a - 1.0);
        const double ct = std::cos(t), st = std::sin(t);
        const double w = W.w(t), w1 = W.w1(t), w2 = W.w2(t);
        const double V1 = (1 + a) * st * w + ct * w1;
        const double V2 = -(1 + a) * ct * w + st * w1;
        const double dV1 = (1 + a) * ct * w + a * st * w1 + ct * w2;
        const double dV2 = (1 + a) * st * w - a * ct * w1 + st * w2;
        return Mat2{ram1 * (a * ct * V1 - st * dV1), ram1 * (a * st * V1 + ct * dV1),
                    ram1 * (a * ct * V2 - st * dV2), ram1 * (a * st * V2 + ct * dV2)};
    };
    ex.p = [W, a](Vec2 v) {
        const double r = v.norm();
        const double t = LshapeW::angle(v);
        return -std::pow(r, a - 1.0) * ((1 + a) * (1 + a) * W.w1(t) + W.w3(t)) / (1 - a);
    };
    ex.f = zero_source();
    return ex;
}

ExactSolution rhombus_eps(double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("rhombus_eps: need 0 < eps <= 1");
    ExactSolution ex;
    ex.name = "rhombus-eps";
    ex.domain = Domain::rhombus;
    ex.degree = 0;
    ex.u = [](Vec2) { return Vec2{0.0, 0.0}; };
    ex.grad_u = [](Vec2) { return Mat2{}; };
    ex.p = [eps](Vec2 v) {
        if (v.x <= -eps) return -1.0;
        if (v.x >= eps) return 1.0;
        return v.x / eps;
    };
    ex.p_breaks = {-eps, eps};
    ex.f.f = [eps](Vec2 v) { return std::abs(v.x) <= eps ? Vec2{1.0 / eps, 0.0} : Vec2{0.0, 0.0}; };
    ex.f.degree = 0;
    ex.f.x_breaks = {-eps, eps};
    return ex;
}

ExactSolution rhombus_px() {
    ExactSolution ex;
    ex.name = "rhombus-px";
    ex.domain = Domain::rhombus;
    ex.degree = 0;
    ex.u = [](Vec2) { return Vec2{0.0, 0.0}; };
    ex.grad_u = [](Vec2) { return Mat2{}; };
    ex.p = [](Vec2 v) { return v.x; };
    ex.f.f = [](Vec2) { return Vec2{1.0, 0.0}; };
    ex.f.degree = 0;
    return ex;
}

bool known_experiment(const std::string& name) {
    return name == "colliding-flow" || name == "lshape" || name == "rhombus-eps" ||
           name == "rhombus-px";
}

SolveOutcome solve_and_measure(const Triangulation& t, Method m, const ExactSolution& exact,
                               int quad_degree_override) {
    SolveOutcome out;
    const SaddleSystem sys = assemble(t, m, exact.f, exact.dirichlet(), quad_degree_override);
    auto [sol, rep] = solve(sys);
    out.dofmap = sys.dofmap;
    out.solution = std::move(sol);
    out.report = rep;
    out.ndof = solved_dof_count(sys);
    out.err_energy = energy_error(t, out.dofmap, out.solution, exact);
    out.err_pressure = pressure_error(t, out.dofmap, out.solution, exact);
    out.err_combined = std::hypot(out.err_energy, out.err_pressure);
    out.err_sum = out.err_energy + out.err_pressure;
    return out;
}

int csv_precision() {
    if (const char* env = std::getenv("STOKESLAB_CSV_PRECISION")) {
        const int p = std::atoi(env);
        if (p >= 3 && p <= 17) return p;
    }
    return 12;
}

std::vector<Triangulation> mesh_sequence(Domain d, int level_max) {
    std::vector<Triangulation> seq;
    seq.push_back(make_domain(d));
    for (int l = 1; l <= level_max; ++l) seq.push_back(red_refine(seq.back()));
    return seq;
}

namespace {

std::string summary_line(const std::string& experiment, Method m, double slope, double final_error) {
    std::ostringstream os;
    os << experiment << ',' << method_name(m) << ',' << std::setprecision(6) << slope << ','
       << std::setprecision(12) << final_error;
    return os.str();
}

void maybe_write_table(const ExperimentSpec& spec, const ConvergenceTable& table) {
    if (spec.out_dir.empty()) return;
    std::filesystem::create_directories(spec.out_dir);
    const auto path =
        std::filesystem::path(spec.out_dir) / (spec.name + "_" + method_name(table.method) + ".csv");
    std::ofstream os(path);
    write_csv(table, os, csv_precision());
}

RunResult run_convergence(const ExperimentSpec& spec) {
    const ExactSolution exact = spec.name == "lshape" ? lshape_solution() : colliding_flow();
    const auto meshes = mesh_sequence(exact.domain, spec.level_max);

    RunResult result;
    for (Method m : spec.methods) {
        result.tables.push_back({spec.name, m, {}});
    }
    const bool all_four = spec.methods.size() == 4;
    std::vector<ChainLevel> chain_levels;

    for (int level = spec.level_min; level <= spec.level_max; ++level) {
        const Triangulation& t = meshes[level];
        const double osc = oscillation(exact.f, t);
        const double hf = hf_norm(exact.f, t);

        std::vector<SolveOutcome> outcomes(spec.methods.size());
        auto job = [&](size_t i) {
            outcomes[i] = solve_and_measure(t, spec.methods[i], exact, spec.quad_degree_override);
        };
        if (spec.reference_mode || spec.methods.size() == 1) {
            for (size_t i = 0; i < spec.methods.size(); ++i) job(i);
        } else {
            std::vector<std::future<void>> futures;
            for (size_t i = 0; i < spec.methods.size(); ++i) {
                futures.push_back(std::async(std::launch::async, job, i));
            }
            for (auto& f : futures) f.get();
        }

        ChainLevel cl;
        cl.level = level;
        cl.hf = hf;
        cl.osc = osc;
        for (size_t i = 0; i < spec.methods.size(); ++i) {
            const SolveOutcome& oc = outcomes[i];
            result.tables[i].rows.push_back({level, oc.ndof, oc.err_energy, oc.err_pressure,
                                             oc.err_combined, osc, hf});
            switch (spec.methods[i]) {
                case Method::CR: cl.e_cr = oc.err_sum; break;
                case Method::MINI: cl.e_mini = oc.err_sum; break;
                case Method::P2P0:
                    cl.e_p2 = oc.err_sum;
                    cl.pi0_p2 = discrete_grad_pi0_distance(t, oc.dofmap, oc.solution);
                    break;
                case Method::BR:
                    cl.e_br = oc.err_sum;
                    cl.pi0_br = discrete_grad_pi0_distance(t, oc.dofmap, oc.solution);
                    break;
            }
        }
        if (all_four) chain_levels.push_back(cl);
    }

    for (const auto& table : result.tables) {
        maybe_write_table(spec, table);
        const double slope =
            table.rows.size() >= 3 ? fit_rate_combined(table) : std::numeric_limits<double>::quiet_NaN();
        result.summary_lines.push_back(
            summary_line(spec.name, table.method, slope, table.rows.back().err_combined));
    }

    if (all_four) {
        result.chain = comparison_chain(spec.name, chain_levels);
        if (!spec.out_dir.empty()) {
            std::ofstream os(std::filesystem::path(spec.out_dir) / (spec.name + "_chain.txt"));
            write_chain_report(*result.chain, os);
        }
    }
    return result;
}

RunResult run_rhombus_eps(const ExperimentSpec& spec) {
    Triangulation t = make_rhombus();
    for (int l = 0; l < spec.level_min; ++l) t = red_refine(t);

    RunResult result;
    for (Method m : spec.methods) result.tables.push_back({spec.name, m, {}});

    for (size_t k = 0; k < spec.eps_list.size(); ++k) {
        const ExactSolution exact = rhombus_eps(spec.eps_list[k]);
        const double osc = oscillation(exact.f, t);
        const double hf = hf_norm(exact.f, t);
        for (size_t i = 0; i < spec.methods.size(); ++i) {
            const SolveOutcome oc = solve_and_measure(t, spec.methods[i], exact,
                                                      spec.quad_degree_override);
            result.tables[i].rows.push_back({static_cast<int>(k), oc.ndof, oc.err_energy,
                                             oc.err_pressure, oc.err_combined, osc, hf});
        }
    }
    for (const auto& table : result.tables) {
        maybe_write_table(spec, table);
        result.summary_lines.push_back(summary_line(
            spec.name, table.method, std::numeric_limits<double>::quiet_NaN(),
            table.rows.back().err_combined));
    }
    return result;
}

RunResult run_rhombus_px(const ExperimentSpec& spec) {
    Triangulation t = make_rhombus();
    for (int l = 0; l < spec.level_min; ++l) t = red_refine(t);
    const ExactSolution exact = rhombus_px();

    RunResult result;
    const double osc = oscillation(exact.f, t);
    const double hf = hf_norm(exact.f, t);
    for (Method m : spec.methods) {
        const SolveOutcome oc = solve_and_measure(t, m, exact, spec.quad_degree_override);
        ConvergenceTable table{spec.name, m, {}};
        table.rows.push_back({spec.level_min, oc.ndof, oc.err_energy, oc.err_pressure,
                              oc.err_combined, osc, hf});
        maybe_write_table(spec, table);
        result.summary_lines.push_back(summary_line(
            spec.name, m, std::numeric_limits<double>::quiet_NaN(), oc.err_combined));
        result.tables.push_back(std::move(table));
    }
    return result;
}

}  // namespace

RunResult run(const ExperimentSpec& spec) {
    if (!known_experiment(spec.name)) throw std::invalid_argument("unknown experiment: " + spec.name);
    RunResult result;
    if (spec.name == "rhombus-eps") {
        result = run_rhombus_eps(spec);
    } else if (spec.name == "rhombus-px") {
        result = run_rhombus_px(spec);
    } else {
        result = run_convergence(spec);
    }
    if (!spec.out_dir.empty()) {
        std::ofstream os(std::filesystem::path(spec.out_dir) / (spec.name + "_summary.txt"));
        for (const auto& line : result.summary_lines) os << line << '\n';
        if (result.chain) write_chain_report(*result.chain, os);
    }
    return result;
}

}  // namespace stokeslab
