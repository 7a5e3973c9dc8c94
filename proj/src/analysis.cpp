#include "stokeslab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "stokeslab/companions.hpp"

namespace stokeslab {

Vec2 discrete_velocity(const Triangulation& t, const MeshGeometry& geom, const DofMap& dm,
                       const DiscreteSolution& sol, int tri, const std::array<double, 3>& bary) {
    const LocalBasis lb = eval_basis(t, geom, dm.method, tri, bary);
    std::vector<int> dofs;
    velocity_element_dofs(t, dm, tri, dofs);
    Vec2 v;
    for (int i = 0; i < lb.n_vel; ++i) v += lb.value[i] * sol.velocity(dofs[i]);
    return v;
}

Mat2 discrete_velocity_gradient(const Triangulation& t, const MeshGeometry& geom, const DofMap& dm,
                                const DiscreteSolution& sol, int tri,
                                const std::array<double, 3>& bary) {
    const LocalBasis lb = eval_basis(t, geom, dm.method, tri, bary);
    std::vector<int> dofs;
    velocity_element_dofs(t, dm, tri, dofs);
    Mat2 g;
    for (int i = 0; i < lb.n_vel; ++i) g += lb.grad[i] * sol.velocity(dofs[i]);
    return g;
}

double discrete_pressure(const Triangulation& t, const DofMap& dm, const DiscreteSolution& sol,
                         int tri, const std::array<double, 3>& bary) {
    if (pressure_space(dm.method) == PressureSpace::P0) return sol.pressure(tri);
    const auto& v = t.triangles[tri].v;
    return sol.pressure(v[0]) * bary[0] + sol.pressure(v[1]) * bary[1] + sol.pressure(v[2]) * bary[2];
}

int error_quadrature_degree(const ExactSolution& exact, Method m) {
    if (exact.degree < 0) return 10;  // singular: fixed degree, error budgeted
    return std::min(12, std::max(2 * exact.degree, 2 * velocity_degree(m)));
}

double energy_error(const Triangulation& t, const DofMap& dm, const DiscreteSolution& sol,
                    const ExactSolution& exact, int quad_degree) {
    const MeshGeometry geom = geometry(t);
    const int degree = quad_degree > 0 ? quad_degree : error_quadrature_degree(exact, dm.method);
    const TriRule& rule = triangle_rule(degree);
    double acc = 0.0;
    std::vector<int> dofs;
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const auto coords = t.triangle_coords(tri);
        const double two_area = 2.0 * geom.tri[tri].area;
        velocity_element_dofs(t, dm, tri, dofs);
        for (const auto& q : rule.points) {
            const LocalBasis lb = eval_basis(t, geom, dm.method, tri, q.bary);
            Mat2 gh;
            for (int i = 0; i < lb.n_vel; ++i) gh += lb.grad[i] * sol.velocity(dofs[i]);
            const Vec2 x = coords[0] * q.bary[0] + coords[1] * q.bary[1] + coords[2] * q.bary[2];
            const Mat2 diff = exact.grad_u(x) - gh;
            acc += q.weight * two_area * diff.frobenius2();
        }
    }
    return std::sqrt(acc);
}

double pressure_error(const Triangulation& t, const DofMap& dm, const DiscreteSolution& sol,
                      const ExactSolution& exact, int quad_degree) {
    const int degree = quad_degree > 0 ? quad_degree : error_quadrature_degree(exact, dm.method);
    const TriRule& rule = triangle_rule(degree);
    double acc = 0.0;
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const auto diff2 = [&](Vec2 x) {
            const double d = exact.p(x) - discrete_pressure(t, dm, sol, tri, barycentric_of(t, tri, x));
            return d * d;
        };
        acc += integrate_triangle_split<double>(t.triangle_coords(tri), diff2, rule, exact.p_breaks);
    }
    return std::sqrt(acc);
}

double oscillation(const SourceField& f, const Triangulation& t, int quad_degree) {
    if (f.is_zero()) return 0.0;
    const MeshGeometry geom = geometry(t);
    const TriRule& rule = triangle_rule(quad_degree);
    double acc = 0.0;
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const auto coords = t.triangle_coords(tri);
        const Vec2 mean = integrate_triangle_split<Vec2>(
                              coords, [&](Vec2 x) { return f.eval(tri, x); }, rule, f.x_breaks) /
                          geom.tri[tri].area;
        const auto dev2 = [&](Vec2 x) {
            const Vec2 d = f.eval(tri, x) - mean;
            return d.dot(d);
        };
        const double h = geom.tri[tri].diameter;
        acc += h * h * integrate_triangle_split<double>(coords, dev2, rule, f.x_breaks);
    }
    return std::sqrt(acc);
}

double hf_norm(const SourceField& f, const Triangulation& t, int quad_degree) {
    if (f.is_zero()) return 0.0;
    const MeshGeometry geom = geometry(t);
    const TriRule& rule = triangle_rule(quad_degree);
    double acc = 0.0;
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const auto f2 = [&](Vec2 x) {
            const Vec2 v = f.eval(tri, x);
            return v.dot(v);
        };
        const double h = geom.tri[tri].diameter;
        acc += h * h *
               integrate_triangle_split<double>(t.triangle_coords(tri), f2, rule, f.x_breaks);
    }
    return std::sqrt(acc);
}

std::pair<double, double> best_approx_terms(const ExactSolution& exact, const Triangulation& t,
                                            int quad_degree) {
    const MeshGeometry geom = geometry(t);
    const TriRule& rule = triangle_rule(quad_degree);
    double acc_grad = 0.0, acc_p = 0.0;
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const auto coords = t.triangle_coords(tri);
        const double area = geom.tri[tri].area;
        const Mat2 gmean =
            integrate_triangle<Mat2>(coords, exact.grad_u, rule) * (1.0 / area);
        acc_grad += integrate_triangle<double>(
            coords, [&](Vec2 x) { return (exact.grad_u(x) - gmean).frobenius2(); }, rule);
        const double pmean =
            integrate_triangle_split<double>(coords, exact.p, rule, exact.p_breaks) / area;
        acc_p += integrate_triangle_split<double>(
            coords,
            [&](Vec2 x) {
                const double d = exact.p(x) - pmean;
                return d * d;
            },
            rule, exact.p_breaks);
    }
    return {std::sqrt(acc_grad), std::sqrt(acc_p)};
}

double discrete_grad_pi0_distance(const Triangulation& t, const DofMap& dm,
                                  const DiscreteSolution& sol, int quad_degree) {
    const MeshGeometry geom = geometry(t);
    const TriRule& rule = triangle_rule(quad_degree);
    double acc = 0.0;
    std::vector<int> dofs;
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        velocity_element_dofs(t, dm, tri, dofs);
        const double two_area = 2.0 * geom.tri[tri].area;
        Mat2 mean;
        for (const auto& q : rule.points) {
            const Mat2 gh = discrete_velocity_gradient(t, geom, dm, sol, tri, q.bary);
            mean += gh * (2.0 * q.weight);  // reference weights sum to 1/2
        }
        for (const auto& q : rule.points) {
            const Mat2 d = discrete_velocity_gradient(t, geom, dm, sol, tri, q.bary) - mean;
            acc += q.weight * two_area * d.frobenius2();
        }
    }
    return std::sqrt(acc);
}

double fit_rate(const std::vector<std::pair<double, double>>& ndof_err, int window) {
    if (static_cast<int>(ndof_err.size()) < 3 || window < 2) {
        throw std::invalid_argument("fit_rate: need at least 3 rows");
    }
    const int n = static_cast<int>(ndof_err.size());
    const int w = std::min(window, n);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = n - w; i < n; ++i) {
        const double x = std::log(ndof_err[i].first);
        const double y = std::log(ndof_err[i].second);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (w * sxy - sx * sy) / (w * sxx - sx * sx);
}

namespace {

std::vector<std::pair<double, double>> column(const ConvergenceTable& tab,
                                              double TableRow::*field) {
    std::vector<std::pair<double, double>> out;
    for (const auto& r : tab.rows) out.emplace_back(static_cast<double>(r.ndof), r.*field);
    return out;
}

}  // namespace

double fit_rate_energy(const ConvergenceTable& t, int w) { return fit_rate(column(t, &TableRow::err_energy), w); }
double fit_rate_pressure(const ConvergenceTable& t, int w) { return fit_rate(column(t, &TableRow::err_pressure), w); }
double fit_rate_combined(const ConvergenceTable& t, int w) { return fit_rate(column(t, &TableRow::err_combined), w); }

double fit_rate_pressure_leading(const ConvergenceTable& table, int window) {
    auto data = column(table, &TableRow::err_pressure);
    if (static_cast<int>(data.size()) > window) data.resize(window);
    return fit_rate(data, window);
}

void write_csv(const ConvergenceTable& table, std::ostream& os, int significant_digits) {
    os << "level,ndof,err_energy,err_pressure,err_combined,osc,hf\n";
    os << std::setprecision(significant_digits);
    for (const auto& r : table.rows) {
        os << r.level << ',' << r.ndof << ',' << r.err_energy << ',' << r.err_pressure << ','
           << r.err_combined << ',' << r.osc << ',' << r.hf << '\n';
    }
}

ChainReport comparison_chain(const std::string& experiment, const std::vector<ChainLevel>& levels) {
    ChainReport rep;
    rep.experiment = experiment;
    rep.levels = levels;
    for (const auto& l : levels) {
        ChainRatios r;
        r.level = l.level;
        r.p2_over_br = l.e_p2 / l.e_br;
        r.br_over_cr = l.e_br / l.e_cr;
        r.cr_over_mini = l.e_cr / (l.e_mini + l.hf);
        r.cr_over_p2 = l.e_cr / (l.e_p2 + l.osc + l.pi0_p2);
        r.cr_over_br = l.e_cr / (l.e_br + l.osc + l.pi0_br);
        rep.ratios.push_back(r);
        rep.max_ratio = std::max({rep.max_ratio, r.p2_over_br, r.br_over_cr, r.cr_over_mini});
    }
    return rep;
}

void write_chain_report(const ChainReport& rep, std::ostream& os) {
    os << "# comparison chain: " << rep.experiment << "\n";
    os << "level  E_P2/E_BR  E_BR/E_CR  E_CR/(E_MINI+hf)  E_CR/(E_P2+osc+pi0)  E_CR/(E_BR+osc+pi0)\n";
    os << std::fixed << std::setprecision(4);
    for (const auto& r : rep.ratios) {
        os << std::setw(5) << r.level << "  " << std::setw(9) << r.p2_over_br << "  " << std::setw(9)
           << r.br_over_cr << "  " << std::setw(16) << r.cr_over_mini << "  " << std::setw(19)
           << r.cr_over_p2 << "  " << std::setw(19) << r.cr_over_br << "\n";
    }
    os.unsetf(std::ios_base::floatfield);
    os << "max chain ratio: " << rep.max_ratio << "\n";
}

}  // namespace stokeslab
