#include "stokeslab/checks.hpp"

#include <cmath>

namespace stokeslab {

Eigen::VectorXd random_cr_field(const Triangulation& t, std::mt19937& rng, bool vector_field) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int ne = t.num_edges();
    const int n = vector_field ? 2 * ne : ne;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (int e = 0; e < ne; ++e) {
        if (t.edges[e].boundary) continue;
        v(e) = dist(rng);
        if (vector_field) v(ne + e) = dist(rng);
    }
    return v;
}

Vec2 PolynomialField::value(Vec2 p) const {
    double vx = 0.0, vy = 0.0;
    int idx = 0;
    for (int a = 0; a <= max_degree; ++a) {
        for (int b = 0; a + b <= max_degree; ++b, ++idx) {
            const double m = std::pow(p.x, a) * std::pow(p.y, b);
            vx += cx[idx] * m;
            vy += cy[idx] * m;
        }
    }
    return {vx, vy};
}

Mat2 PolynomialField::gradient(Vec2 p) const {
    Mat2 g;
    int idx = 0;
    for (int a = 0; a <= max_degree; ++a) {
        for (int b = 0; a + b <= max_degree; ++b, ++idx) {
            const double dx = a == 0 ? 0.0 : a * std::pow(p.x, a - 1) * std::pow(p.y, b);
            const double dy = b == 0 ? 0.0 : b * std::pow(p.x, a) * std::pow(p.y, b - 1);
            g.a00 += cx[idx] * dx;
            g.a01 += cx[idx] * dy;
            g.a10 += cy[idx] * dx;
            g.a11 += cy[idx] * dy;
        }
    }
    return g;
}

PolynomialField random_polynomial_field(std::mt19937& rng, int max_degree) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    PolynomialField f;
    f.max_degree = max_degree;
    int n = 0;
    for (int a = 0; a <= max_degree; ++a) {
        for (int b = 0; a + b <= max_degree; ++b) ++n;
    }
    f.cx.resize(n);
    f.cy.resize(n);
    for (int i = 0; i < n; ++i) {
        f.cx[i] = dist(rng);
        f.cy[i] = dist(rng);
    }
    return f;
}

std::pair<double, double> bubble_normalization_errors() {
    const EdgeRule& er = edge_rule(3);
    double be = 0.0;
    for (const auto& q : er.points) be += q.weight * 6.0 * q.s * (1.0 - q.s);
    const TriRule& tr = triangle_rule(3);
    double bt = 0.0;
    for (const auto& q : tr.points) {
        bt += 2.0 * q.weight * 60.0 * q.bary[0] * q.bary[1] * q.bary[2];
    }
    return {std::abs(be - 1.0), std::abs(bt - 1.0)};
}

CompanionCheck check_companions(const Triangulation& t, int n_fields, unsigned seed) {
    std::mt19937 rng(seed);
    const MeshGeometry geom = geometry(t);
    CompanionCheck out;
    for (int s = 0; s < n_fields; ++s) {
        const Eigen::VectorXd v = random_cr_field(t, rng);
        const double gnorm = norm_grad_nc(t, v);
        if (gnorm == 0.0) continue;  // all-boundary mesh (coarse rhombus)
        const CompanionField J1 = j1(t, v);
        const CompanionField J2 = j2(t, v);
        const CompanionField J3 = j3(t, v);
        for (int tri = 0; tri < t.num_triangles(); ++tri) {
            const double scale = gnorm * geom.tri[tri].area;
            const Vec2 r2 = integral_grad_diff(t, tri, v, J2);
            const Vec2 r3 = integral_grad_diff(t, tri, v, J3);
            out.max_conservation_residual =
                std::max({out.max_conservation_residual, r2.norm() / scale, r3.norm() / scale});
            out.max_mean_residual =
                std::max(out.max_mean_residual, std::abs(integral_diff(t, tri, v, J3)) / scale);
        }
        for (const CompanionField* J : {&J1, &J2, &J3}) {
            out.max_stability_constant =
                std::max(out.max_stability_constant, norm_scaled_diff(t, v, *J) / gnorm);
        }
    }
    return out;
}

double inc_identity_residual(const Triangulation& t, const std::function<Vec2(Vec2)>& v,
                             const std::function<Mat2(Vec2)>& grad_v, int quad_degree) {
    const Eigen::VectorXd coeffs = inc_interpolate(t, v, std::min(10, quad_degree));
    const auto proj = pi0<Mat2>(t, grad_v, std::min(12, quad_degree));
    const int ne = t.num_edges();
    double worst = 0.0;
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const Vec2 gx = cr_gradient(t, tri, coeffs.head(ne));
        const Vec2 gy = cr_gradient(t, tri, coeffs.tail(ne));
        const Mat2 diff = Mat2{gx.x, gx.y, gy.x, gy.y} - proj[tri];
        worst = std::max(worst, std::sqrt(diff.frobenius2()));
    }
    return worst;
}

std::vector<EpsSweepEntry> counterexample_eps_sweep(const std::vector<double>& eps_list) {
    const Triangulation t = make_rhombus();
    std::vector<EpsSweepEntry> out;
    for (double eps : eps_list) {
        const ExactSolution exact = rhombus_eps(eps);
        EpsSweepEntry e;
        e.eps = eps;

        const SolveOutcome cr = solve_and_measure(t, Method::CR, exact);
        e.cr_velocity_max = cr.solution.velocity.cwiseAbs().maxCoeff();
        const MeshGeometry geom = geometry(t);
        for (int tri = 0; tri < t.num_triangles(); ++tri) {
            if (geom.tri[tri].centroid.x > 0.0) e.cr_pressure_pos = cr.solution.pressure(tri);
        }
        e.cr_pressure_err = cr.err_pressure;

        const SolveOutcome mini = solve_and_measure(t, Method::MINI, exact);
        e.mini_pressure_err = mini.err_pressure;
        out.push_back(e);
    }
    return out;
}

PxReport counterexample_px_report() {
    const Triangulation t = make_rhombus();
    const ExactSolution exact = rhombus_px();
    PxReport r;

    const SolveOutcome mini = solve_and_measure(t, Method::MINI, exact);
    r.mini_velocity_max = mini.solution.velocity.cwiseAbs().maxCoeff();
    r.mini_pressure_err = mini.err_pressure;
    r.cr_pressure_err = solve_and_measure(t, Method::CR, exact).err_pressure;
    r.p2_pressure_err = solve_and_measure(t, Method::P2P0, exact).err_pressure;
    r.br_pressure_err = solve_and_measure(t, Method::BR, exact).err_pressure;
    r.x_pi0_distance = best_approx_terms(exact, t).second;
    return r;
}

std::vector<PseudostressLevel> pseudostress_sweep(const ExactSolution& exact, int level_max) {
    std::vector<PseudostressLevel> out;
    Triangulation t = make_domain(exact.domain);
    for (int level = 0; level <= level_max; ++level) {
        if (level > 0) t = red_refine(t);
        PseudostressLevel pl;
        pl.level = level;

        const SolveOutcome cr = solve_and_measure(t, Method::CR, exact);
        pl.rhs = cr.err_sum;
        pl.osc = oscillation(exact.f, t);
        pl.hf = hf_norm(exact.f, t);

        const PseudostressResult ps = ps_from_cr(t, exact.f, exact.dirichlet());
        const auto [dev_err, tr_err] = ps_errors(t, ps.field, exact);
        pl.lhs = dev_err + tr_err;
        pl.trace_integral = ps_trace_integral(t, ps.field);
        pl.c_forward = pl.lhs / (pl.rhs + pl.osc);
        pl.c_backward = pl.rhs / (pl.lhs + pl.hf);

        const int ne = t.num_edges();
        const MeshGeometry geom = geometry(t);
        const Eigen::VectorXd diff = cr.solution.velocity - ps.tilde_solution.velocity;
        double acc = 0.0;
        for (int tri = 0; tri < t.num_triangles(); ++tri) {
            const Vec2 gx = cr_gradient(t, tri, diff.head(ne));
            const Vec2 gy = cr_gradient(t, tri, diff.tail(ne));
            acc += geom.tri[tri].area * (gx.dot(gx) + gy.dot(gy));
        }
        pl.tilde_distance = std::sqrt(acc);
        out.push_back(pl);
    }
    return out;
}

DivergenceCheck check_divergence(const Triangulation& t, const ExactSolution& exact) {
    DivergenceCheck out;
    const MeshGeometry geom = geometry(t);
    const TriRule& rule = triangle_rule(2);

    const SolveOutcome cr = solve_and_measure(t, Method::CR, exact);
    const int ne = t.num_edges();
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const Vec2 gx = cr_gradient(t, tri, cr.solution.velocity.head(ne));
        const Vec2 gy = cr_gradient(t, tri, cr.solution.velocity.tail(ne));
        out.max_cr_pointwise = std::max(out.max_cr_pointwise, std::abs(gx.x + gy.y));
    }

    for (Method m : {Method::P2P0, Method::BR}) {
        const SolveOutcome oc = solve_and_measure(t, m, exact);
        for (int tri = 0; tri < t.num_triangles(); ++tri) {
            const double two_area = 2.0 * geom.tri[tri].area;
            double mean_div = 0.0;
            for (const auto& q : rule.points) {
                const Mat2 g =
                    discrete_velocity_gradient(t, geom, oc.dofmap, oc.solution, tri, q.bary);
                mean_div += q.weight * two_area * g.trace();
            }
            out.max_mean_p0 = std::max(out.max_mean_p0, std::abs(mean_div));
        }
    }
    return out;
}

ConsistencyCheck check_exact_consistency(const ExactSolution& exact, int n_points, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    constexpr double margin = 0.05;
    constexpr double h = 1e-4;

    auto inside = [&](Vec2 p) {
        switch (exact.domain) {
            case Domain::square:
                return std::abs(p.x) < 1.0 - margin && std::abs(p.y) < 1.0 - margin;
            case Domain::rhombus: {
                if (std::abs(p.x) + std::abs(p.y) >= 1.0 - margin) return false;
                for (double b : exact.p_breaks) {
                    if (std::abs(p.x - b) < margin) return false;
                }
                return true;
            }
            case Domain::lshape: {
                if (std::abs(p.x) >= 1.0 - margin || std::abs(p.y) >= 1.0 - margin) return false;
                if (p.x >= -margin && p.y <= margin) return false;  // slit quadrant + corner
                return p.norm() > 0.3;  // keep finite differences away from the singularity
            }
            case Domain::custom: return false;
        }
        return false;
    };

    ConsistencyCheck out;
    for (int i = 0; i < n_points; ++i) {
        Vec2 p;
        do {
            p = {dist(rng), dist(rng)};
        } while (!inside(p));

        out.max_div = std::max(out.max_div, std::abs(exact.grad_u(p).trace()));

        const Vec2 lap = (exact.u({p.x + h, p.y}) + exact.u({p.x - h, p.y}) +
                          exact.u({p.x, p.y + h}) + exact.u({p.x, p.y - h}) - 4.0 * exact.u(p)) /
                         (h * h);
        const Vec2 grad_p = {(exact.p({p.x + h, p.y}) - exact.p({p.x - h, p.y})) / (2.0 * h),
                             (exact.p({p.x, p.y + h}) - exact.p({p.x, p.y - h})) / (2.0 * h)};
        const Vec2 fv = exact.f.is_zero() ? Vec2{} : exact.f.eval(0, p);
        const Vec2 res = -lap + grad_p - fv;
        const double scale = std::max(1.0, lap.norm() + grad_p.norm() + fv.norm());
        out.max_momentum_residual = std::max(out.max_momentum_residual, res.norm() / scale);
    }
    return out;
}

}  // namespace stokeslab
