#include "stokeslab/companions.hpp"

#include <cmath>

namespace stokeslab {

namespace {

// Local CR shape functions are 1 - 2 lambda_k with edge k opposite vertex k.
std::array<double, 3> cr_local_coeffs(const Triangulation& t, int tri, const Eigen::VectorXd& cr) {
    const auto& te = t.tri_edges[tri];
    return {cr(te[0]), cr(te[1]), cr(te[2])};
}

}  // namespace

double cr_value(const Triangulation& t, int tri, const std::array<double, 3>& bary,
                const Eigen::VectorXd& cr) {
    const auto c = cr_local_coeffs(t, tri, cr);
    double v = 0.0;
    for (int k = 0; k < 3; ++k) v += c[k] * (1.0 - 2.0 * bary[k]);
    return v;
}

Vec2 cr_gradient(const Triangulation& t, int tri, const Eigen::VectorXd& cr) {
    const auto c = cr_local_coeffs(t, tri, cr);
    const auto g = barycentric_gradients(t, tri);
    Vec2 grad;
    for (int k = 0; k < 3; ++k) grad += g[k] * (-2.0 * c[k]);
    return grad;
}

double CompanionField::value(const Triangulation& t, int tri, const std::array<double, 3>& l) const {
    const auto& v = t.triangles[tri].v;
    double out = vertex(v[0]) * l[0] + vertex(v[1]) * l[1] + vertex(v[2]) * l[2];
    if (k >= 2) {
        for (int e = 0; e < 3; ++e) {
            const int i = (e + 1) % 3, j = (e + 2) % 3;
            out += edge_bubble(t.tri_edges[tri][e]) * 6.0 * l[i] * l[j];
        }
    }
    if (k >= 3) out += elem_bubble(tri) * 60.0 * l[0] * l[1] * l[2];
    return out;
}

Vec2 CompanionField::gradient(const Triangulation& t, int tri, const std::array<double, 3>& l) const {
    const auto& v = t.triangles[tri].v;
    const auto g = barycentric_gradients(t, tri);
    Vec2 out = g[0] * vertex(v[0]) + g[1] * vertex(v[1]) + g[2] * vertex(v[2]);
    if (k >= 2) {
        for (int e = 0; e < 3; ++e) {
            const int i = (e + 1) % 3, j = (e + 2) % 3;
            out += (g[i] * l[j] + g[j] * l[i]) * (6.0 * edge_bubble(t.tri_edges[tri][e]));
        }
    }
    if (k >= 3) {
        out += (g[0] * (l[1] * l[2]) + g[1] * (l[0] * l[2]) + g[2] * (l[0] * l[1])) *
               (60.0 * elem_bubble(tri));
    }
    return out;
}

Eigen::VectorXd inc_interpolate(const Triangulation& t, const std::function<Vec2(Vec2)>& v,
                                int edge_quad_degree) {
    const EdgeRule& rule = edge_rule(edge_quad_degree);
    const int ne = t.num_edges();
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(2 * ne);
    for (int e = 0; e < ne; ++e) {
        const Vec2 a = t.vertices[t.edges[e].a].pos();
        const Vec2 b = t.vertices[t.edges[e].b].pos();
        const Vec2 mean = integrate_edge<Vec2>(a, b, v, rule) / (b - a).norm();
        coeffs(e) = mean.x;
        coeffs(ne + e) = mean.y;
    }
    return coeffs;
}

CompanionField j1(const Triangulation& t, const Eigen::VectorXd& cr) {
    CompanionField J;
    J.k = 1;
    J.vertex = Eigen::VectorXd::Zero(t.num_vertices());
    J.edge_bubble = Eigen::VectorXd::Zero(t.num_edges());
    J.elem_bubble = Eigen::VectorXd::Zero(t.num_triangles());

    Eigen::VectorXd count = Eigen::VectorXd::Zero(t.num_vertices());
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const auto c = cr_local_coeffs(t, tri, cr);
        for (int k = 0; k < 3; ++k) {
            const int z = t.triangles[tri].v[k];
            if (t.vertex_on_boundary[z]) continue;
            // trace of the affine piece at the vertex: -c_k + c_{k+1} + c_{k+2}
            J.vertex(z) += -c[k] + c[(k + 1) % 3] + c[(k + 2) % 3];
            count(z) += 1.0;
        }
    }
    for (int z = 0; z < t.num_vertices(); ++z) {
        if (count(z) > 0.0) J.vertex(z) /= count(z);
    }
    return J;
}

CompanionField j2(const Triangulation& t, const Eigen::VectorXd& cr) {
    CompanionField J = j1(t, cr);
    J.k = 2;
    const EdgeRule& rule = edge_rule(5);
    for (int e = 0; e < t.num_edges(); ++e) {
        const Edge& ed = t.edges[e];
        if (ed.boundary) continue;
        const int tri = ed.tri[0];  // CR edge means agree from both sides
        const Vec2 a = t.vertices[ed.a].pos();
        const Vec2 b = t.vertices[ed.b].pos();
        double mean = 0.0;
        for (const auto& q : rule.points) {
            const Vec2 x = a + (b - a) * q.s;
            const auto l = barycentric_of(t, tri, x);
            mean += q.weight * (cr_value(t, tri, l, cr) - J.value(t, tri, l));
        }
        J.edge_bubble(e) = mean;
    }
    return J;
}

CompanionField j3(const Triangulation& t, const Eigen::VectorXd& cr) {
    CompanionField J = j2(t, cr);
    J.k = 3;
    const TriRule& rule = triangle_rule(3);
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        double mean = 0.0;
        for (const auto& q : rule.points) {
            mean += 2.0 * q.weight * (cr_value(t, tri, q.bary, cr) - J.value(t, tri, q.bary));
        }
        J.elem_bubble(tri) = mean;  // reference weights sum to 1/2, so 2w averages
    }
    return J;
}

namespace {

Eigen::VectorXd component(const Eigen::VectorXd& cr_vec, int comp, int ne) {
    return cr_vec.segment(comp * ne, ne);
}

}  // namespace

VectorCompanionField j1_vec(const Triangulation& t, const Eigen::VectorXd& cr_vec) {
    const int ne = t.num_edges();
    return {j1(t, component(cr_vec, 0, ne)), j1(t, component(cr_vec, 1, ne))};
}
VectorCompanionField j2_vec(const Triangulation& t, const Eigen::VectorXd& cr_vec) {
    const int ne = t.num_edges();
    return {j2(t, component(cr_vec, 0, ne)), j2(t, component(cr_vec, 1, ne))};
}
VectorCompanionField j3_vec(const Triangulation& t, const Eigen::VectorXd& cr_vec) {
    const int ne = t.num_edges();
    return {j3(t, component(cr_vec, 0, ne)), j3(t, component(cr_vec, 1, ne))};
}

double norm_grad_nc(const Triangulation& t, const Eigen::VectorXd& cr) {
    const MeshGeometry g = geometry(t);
    double acc = 0.0;
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const Vec2 gr = cr_gradient(t, tri, cr);
        acc += g.tri[tri].area * gr.dot(gr);
    }
    return std::sqrt(acc);
}

double norm_grad_diff(const Triangulation& t, const Eigen::VectorXd& cr, const CompanionField& J) {
    const TriRule& rule = triangle_rule(6);
    double acc = 0.0;
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const Vec2 gv = cr_gradient(t, tri, cr);
        const double two_area = 2.0 * t.signed_area(tri);
        for (const auto& q : rule.points) {
            const Vec2 d = gv - J.gradient(t, tri, q.bary);
            acc += q.weight * two_area * d.dot(d);
        }
    }
    return std::sqrt(acc);
}

double norm_companion_grad(const Triangulation& t, const CompanionField& J) {
    const TriRule& rule = triangle_rule(6);
    double acc = 0.0;
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const double two_area = 2.0 * t.signed_area(tri);
        for (const auto& q : rule.points) {
            const Vec2 d = J.gradient(t, tri, q.bary);
            acc += q.weight * two_area * d.dot(d);
        }
    }
    return std::sqrt(acc);
}

double norm_scaled_diff(const Triangulation& t, const Eigen::VectorXd& cr, const CompanionField& J) {
    const TriRule& rule = triangle_rule(6);
    const MeshGeometry g = geometry(t);
    double acc = 0.0;
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const double two_area = 2.0 * g.tri[tri].area;
        const double inv_h2 = 1.0 / (g.tri[tri].diameter * g.tri[tri].diameter);
        for (const auto& q : rule.points) {
            const double d = cr_value(t, tri, q.bary, cr) - J.value(t, tri, q.bary);
            acc += q.weight * two_area * inv_h2 * d * d;
        }
    }
    return std::sqrt(acc);
}

Vec2 integral_grad_diff(const Triangulation& t, int tri, const Eigen::VectorXd& cr,
                        const CompanionField& J) {
    const TriRule& rule = triangle_rule(3);
    const Vec2 gv = cr_gradient(t, tri, cr);
    const double two_area = 2.0 * t.signed_area(tri);
    Vec2 acc;
    for (const auto& q : rule.points) {
        acc += (gv - J.gradient(t, tri, q.bary)) * (q.weight * two_area);
    }
    return acc;
}

double integral_diff(const Triangulation& t, int tri, const Eigen::VectorXd& cr,
                     const CompanionField& J) {
    const TriRule& rule = triangle_rule(3);
    const double two_area = 2.0 * t.signed_area(tri);
    double acc = 0.0;
    for (const auto& q : rule.points) {
        acc += (cr_value(t, tri, q.bary, cr) - J.value(t, tri, q.bary)) * (q.weight * two_area);
    }
    return acc;
}

}  // namespace stokeslab
