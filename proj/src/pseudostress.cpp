#include "stokeslab/pseudostress.hpp"

#include <cmath>

#include "stokeslab/companions.hpp"

namespace stokeslab {

PseudostressResult ps_from_cr(const Triangulation& t, const SourceField& f, const BoundaryTrace& g) {
    const MeshGeometry geom = geometry(t);

    // Project the load; the tilde problem uses Pi0 f as its right-hand side.
    std::vector<Vec2> f0(t.num_triangles());
    if (!f.is_zero()) {
        const TriRule& rule = triangle_rule(f.degree < 0 ? 10 : std::max(2, f.degree + 1));
        for (int tri = 0; tri < t.num_triangles(); ++tri) {
            f0[tri] = integrate_triangle_split<Vec2>(
                          t.triangle_coords(tri), [&](Vec2 x) { return f.eval(tri, x); }, rule,
                          f.x_breaks) /
                      geom.tri[tri].area;
        }
    }
    SourceField projected;
    projected.degree = 0;
    if (!f.is_zero()) projected.f_elem = [f0](int tri, Vec2) { return f0[tri]; };

    PseudostressResult out;
    const SaddleSystem sys = assemble(t, Method::CR, projected, g);
    out.dofmap = sys.dofmap;
    out.tilde_solution = solve(sys).first;

    const int ne = t.num_edges();
    out.field.base.resize(t.num_triangles());
    out.field.half_load.resize(t.num_triangles());
    out.field.centroid.resize(t.num_triangles());
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const Vec2 gx = cr_gradient(t, tri, out.tilde_solution.velocity.head(ne));
        const Vec2 gy = cr_gradient(t, tri, out.tilde_solution.velocity.tail(ne));
        const Mat2 grad{gx.x, gx.y, gy.x, gy.y};
        out.field.base[tri] = grad - identity2(out.tilde_solution.pressure(tri));
        out.field.half_load[tri] = f0[tri] * 0.5;
        out.field.centroid[tri] = geom.tri[tri].centroid;
    }
    return out;
}

std::pair<double, double> ps_errors(const Triangulation& t, const PseudostressField& ps,
                                    const ExactSolution& exact) {
    // The (x - mid(T)) factor raises the integrand degree by one.
    const int degree = std::min(12, error_quadrature_degree(exact, Method::CR) + 1);
    const TriRule& rule = triangle_rule(degree);
    double acc_dev = 0.0, acc_tr = 0.0;
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const auto coords = t.triangle_coords(tri);
        acc_dev += integrate_triangle<double>(
            coords,
            [&](Vec2 x) { return (exact.grad_u(x) - ps.value(tri, x).deviatoric()).frobenius2(); },
            rule);
        acc_tr += integrate_triangle_split<double>(
            coords,
            [&](Vec2 x) {
                const double d = exact.p(x) + 0.5 * ps.value(tri, x).trace();
                return d * d;
            },
            rule, exact.p_breaks);
    }
    return {std::sqrt(acc_dev), std::sqrt(acc_tr)};
}

double ps_trace_integral(const Triangulation& t, const PseudostressField& ps) {
    const TriRule& rule = triangle_rule(2);
    double acc = 0.0;
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        acc += integrate_triangle<double>(
            t.triangle_coords(tri), [&](Vec2 x) { return ps.value(tri, x).trace(); }, rule);
    }
    return acc;
}

}  // namespace stokeslab
