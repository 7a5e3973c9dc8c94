#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "stokeslab/checks.hpp"
#include "stokeslab/experiments.hpp"

namespace py = pybind11;
using namespace stokeslab;

namespace {

Triangulation build_mesh(const std::string& domain, int level) {
    Triangulation t = make_domain(domain_from_name(domain));
    for (int l = 0; l < level; ++l) t = red_refine(t);
    return t;
}

ExactSolution exact_by_name(const std::string& name, double eps) {
    if (name == "colliding-flow") return colliding_flow();
    if (name == "lshape") return lshape_solution();
    if (name == "rhombus-eps") return rhombus_eps(eps);
    if (name == "rhombus-px") return rhombus_px();
    throw std::invalid_argument("unknown experiment: " + name);
}

py::dict outcome_to_dict(const SolveOutcome& oc) {
    py::dict d;
    d["ndof"] = oc.ndof;
    d["err_energy"] = oc.err_energy;
    d["err_pressure"] = oc.err_pressure;
    d["err_combined"] = oc.err_combined;
    d["relative_residual"] = oc.report.relative_residual;
    d["velocity"] = std::vector<double>(oc.solution.velocity.data(),
                                        oc.solution.velocity.data() + oc.solution.velocity.size());
    d["pressure"] = std::vector<double>(oc.solution.pressure.data(),
                                        oc.solution.pressure.data() + oc.solution.pressure.size());
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "First-order mixed finite element laboratory for the 2D Stokes equations";

    py::class_<Triangulation>(m, "Triangulation")
        .def_property_readonly("num_vertices", &Triangulation::num_vertices)
        .def_property_readonly("num_edges", &Triangulation::num_edges)
        .def_property_readonly("num_triangles", &Triangulation::num_triangles)
        .def_property_readonly("num_boundary_edges", &Triangulation::num_boundary_edges)
        .def_property_readonly("level", [](const Triangulation& t) { return t.level; })
        .def_property_readonly("domain", [](const Triangulation& t) { return domain_name(t.domain); })
        .def_property_readonly("vertices",
                               [](const Triangulation& t) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const auto& v : t.vertices) out.emplace_back(v.x, v.y);
                                   return out;
                               })
        .def_property_readonly("triangles",
                               [](const Triangulation& t) {
                                   std::vector<std::array<int, 3>> out;
                                   for (const auto& tr : t.triangles) out.push_back(tr.v);
                                   return out;
                               })
        .def("refine", &red_refine)
        .def("total_area", [](const Triangulation& t) { return geometry(t).total_area; })
        .def("max_diameter", [](const Triangulation& t) { return geometry(t).max_diameter; })
        .def("dump",
             [](const Triangulation& t) {
                 std::ostringstream os;
                 dump_mesh(t, os);
                 return os.str();
             })
        .def("__repr__", [](const Triangulation& t) {
            std::ostringstream os;
            os << "Triangulation(" << domain_name(t.domain) << ", level=" << t.level
               << ", V=" << t.num_vertices() << ", E=" << t.num_edges()
               << ", T=" << t.num_triangles() << ")";
            return os.str();
        });

    m.def("make_mesh", &build_mesh, py::arg("domain"), py::arg("level") = 0,
          "Build a triangulation of 'square', 'rhombus' or 'lshape' at a refinement level");
    m.def("load_mesh", [](const std::string& text) {
        std::istringstream is(text);
        return load_mesh(is);
    });

    m.def(
        "dof_counts",
        [](const Triangulation& t, const std::string& method) {
            const DofMap dm = build_dofmap(t, method_from_name(method));
            py::dict d;
            d["velocity"] = dm.n_velocity;
            d["pressure"] = dm.n_pressure;
            d["velocity_interior"] = static_cast<int>(dm.interior.size());
            return d;
        },
        py::arg("mesh"), py::arg("method"));

    m.def(
        "solve",
        [](const Triangulation& t, const std::string& method, const std::string& experiment,
           double eps) {
            const ExactSolution ex = exact_by_name(experiment, eps);
            return outcome_to_dict(solve_and_measure(t, method_from_name(method), ex));
        },
        py::arg("mesh"), py::arg("method"), py::arg("experiment"), py::arg("eps") = 0.5,
        "Assemble, solve and measure one method against an experiment's exact solution");

    m.def(
        "run_experiment",
        [](const std::string& name, const std::vector<std::string>& methods, int level_min,
           int level_max, const std::vector<double>& eps_list, const std::string& out_dir) {
            ExperimentSpec spec;
            spec.name = name;
            if (!methods.empty()) {
                spec.methods.clear();
                for (const auto& s : methods) spec.methods.push_back(method_from_name(s));
            }
            spec.level_min = level_min;
            spec.level_max = level_max;
            if (!eps_list.empty()) spec.eps_list = eps_list;
            spec.out_dir = out_dir;
            const RunResult r = run(spec);
            py::dict out;
            py::list tables;
            for (const auto& tab : r.tables) {
                py::dict td;
                td["method"] = method_name(tab.method);
                py::list rows;
                for (const auto& row : tab.rows) {
                    py::dict rd;
                    rd["level"] = row.level;
                    rd["ndof"] = row.ndof;
                    rd["err_energy"] = row.err_energy;
                    rd["err_pressure"] = row.err_pressure;
                    rd["err_combined"] = row.err_combined;
                    rd["osc"] = row.osc;
                    rd["hf"] = row.hf;
                    rows.append(rd);
                }
                td["rows"] = rows;
                if (tab.rows.size() >= 3) td["slope_combined"] = fit_rate_combined(tab);
                tables.append(td);
            }
            out["tables"] = tables;
            if (r.chain) {
                py::list ratios;
                for (const auto& cr : r.chain->ratios) {
                    py::dict rd;
                    rd["level"] = cr.level;
                    rd["p2_over_br"] = cr.p2_over_br;
                    rd["br_over_cr"] = cr.br_over_cr;
                    rd["cr_over_mini"] = cr.cr_over_mini;
                    ratios.append(rd);
                }
                out["chain_ratios"] = ratios;
                out["max_chain_ratio"] = r.chain->max_ratio;
            }
            return out;
        },
        py::arg("name"), py::arg("methods") = std::vector<std::string>{}, py::arg("level_min") = 0,
        py::arg("level_max") = 5, py::arg("eps_list") = std::vector<double>{},
        py::arg("out_dir") = std::string{});

    m.def("fit_rate", [](const std::vector<std::pair<double, double>>& data, int window) {
        return fit_rate(data, window);
    }, py::arg("ndof_err"), py::arg("window") = 3);

    m.def("counterexample_eps_sweep", [](const std::vector<double>& eps) {
        py::list out;
        for (const auto& e : counterexample_eps_sweep(eps)) {
            py::dict d;
            d["eps"] = e.eps;
            d["cr_velocity_max"] = e.cr_velocity_max;
            d["cr_pressure_pos"] = e.cr_pressure_pos;
            d["cr_pressure_err"] = e.cr_pressure_err;
            d["mini_pressure_err"] = e.mini_pressure_err;
            out.append(d);
        }
        return out;
    });

    m.def("counterexample_px", [] {
        const PxReport r = counterexample_px_report();
        py::dict d;
        d["mini_velocity_max"] = r.mini_velocity_max;
        d["mini_pressure_err"] = r.mini_pressure_err;
        d["cr_pressure_err"] = r.cr_pressure_err;
        d["p2_pressure_err"] = r.p2_pressure_err;
        d["br_pressure_err"] = r.br_pressure_err;
        d["x_pi0_distance"] = r.x_pi0_distance;
        return d;
    });

    m.def("verify_companions", [](const std::string& domain, int level, int n_fields, unsigned seed) {
        const Triangulation t = build_mesh(domain, level);
        const CompanionCheck c = check_companions(t, n_fields, seed);
        py::dict d;
        d["max_conservation_residual"] = c.max_conservation_residual;
        d["max_mean_residual"] = c.max_mean_residual;
        d["max_stability_constant"] = c.max_stability_constant;
        return d;
    }, py::arg("domain"), py::arg("level") = 2, py::arg("n_fields") = 20, py::arg("seed") = 1234);
}
