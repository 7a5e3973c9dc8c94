#include "stokeslab/assembly.hpp"

#include <algorithm>
#include <stdexcept>

namespace stokeslab {

int assembly_quadrature_degree(Method m, const SourceField& f) {
    const int vdeg = velocity_degree(m);
    const int fdeg = f.is_zero() ? 0 : (f.degree < 0 ? 12 - vdeg : f.degree);
    return std::min(12, std::max(2 * vdeg, fdeg + vdeg));
}

LocalMatrices local_matrices(const Triangulation& t, const MeshGeometry& geom, Method m, int tri,
                             const SourceField& f, int quad_degree) {
    const TriRule& rule = triangle_rule(quad_degree);
    const auto coords = t.triangle_coords(tri);
    const double two_area = 2.0 * geom.tri[tri].area;

    LocalBasis lb = eval_basis(t, geom, m, tri, rule.points[0].bary);
    LocalMatrices lm;
    lm.stiffness = Eigen::MatrixXd::Zero(lb.n_vel, lb.n_vel);
    lm.div_coupling = Eigen::MatrixXd::Zero(lb.n_pre, lb.n_vel);
    lm.load = Eigen::VectorXd::Zero(lb.n_vel);

    for (const auto& q : rule.points) {
        lb = eval_basis(t, geom, m, tri, q.bary);
        const double w = q.weight * two_area;
        for (int i = 0; i < lb.n_vel; ++i) {
            for (int j = 0; j <= i; ++j) {
                const double v = w * lb.grad[i].ddot(lb.grad[j]);
                lm.stiffness(i, j) += v;
                if (i != j) lm.stiffness(j, i) += v;
            }
            for (int qi = 0; qi < lb.n_pre; ++qi) {
                lm.div_coupling(qi, i) += w * lb.pvalue[qi] * lb.grad[i].trace();
            }
        }
    }

    if (!f.is_zero()) {
        // The load may jump across vertical lines (strip sources); the element
        // is split there so the quadrature stays exact.
        const auto subtris = f.x_breaks.empty()
                                 ? std::vector<std::array<Vec2, 3>>{coords}
                                 : split_triangle_at_vertical_lines(coords, f.x_breaks);
        for (const auto& sub : subtris) {
            const double sub_two_area = cross(sub[1] - sub[0], sub[2] - sub[0]);
            for (const auto& q : rule.points) {
                const Vec2 x = sub[0] * q.bary[0] + sub[1] * q.bary[1] + sub[2] * q.bary[2];
                lb = eval_basis(t, geom, m, tri, barycentric_of(t, tri, x));
                const Vec2 fx = f.eval(tri, x);
                const double w = q.weight * sub_two_area;
                for (int i = 0; i < lb.n_vel; ++i) lm.load(i) += w * fx.dot(lb.value[i]);
            }
        }
    }
    return lm;
}

SaddleSystem assemble(const Triangulation& t, Method m, const SourceField& f, const BoundaryTrace& g,
                      int quad_degree_override) {
    const MeshGeometry geom = geometry(t);
    const int quad_degree =
        quad_degree_override > 0 ? quad_degree_override : assembly_quadrature_degree(m, f);

    SaddleSystem sys;
    sys.method = m;
    sys.dofmap = build_dofmap(t, m);
    const DofMap& dm = sys.dofmap;

    if (g) {
        const auto lift = interpolate_boundary(t, geom, m, g);
        sys.g_lift = Eigen::Map<const Eigen::VectorXd>(lift.data(), lift.size());
    } else {
        sys.g_lift = Eigen::VectorXd::Zero(dm.n_velocity);
    }

    // interior reindexing
    std::vector<int> reduced(dm.n_velocity, -1);
    for (size_t i = 0; i < dm.interior.size(); ++i) reduced[dm.interior[i]] = static_cast<int>(i);
    const int ni = static_cast<int>(dm.interior.size());

    std::vector<Eigen::Triplet<double>> a_trip, b_trip;
    sys.F = Eigen::VectorXd::Zero(ni);
    sys.G = Eigen::VectorXd::Zero(dm.n_pressure);
    sys.c = Eigen::VectorXd::Zero(dm.n_pressure);

    std::vector<int> vdofs, pdofs;
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const LocalMatrices lm = local_matrices(t, geom, m, tri, f, quad_degree);
        velocity_element_dofs(t, dm, tri, vdofs);
        pressure_element_dofs(t, dm, tri, pdofs);

        const int nl = static_cast<int>(vdofs.size());
        for (int i = 0; i < nl; ++i) {
            const int gi = vdofs[i];
            const int ri = reduced[gi];
            if (ri < 0) continue;
            sys.F(ri) += lm.load(i);
            for (int j = 0; j < nl; ++j) {
                const int gj = vdofs[j];
                const int rj = reduced[gj];
                if (rj >= 0) {
                    a_trip.emplace_back(ri, rj, lm.stiffness(i, j));
                } else {
                    sys.F(ri) -= lm.stiffness(i, j) * sys.g_lift(gj);
                }
            }
        }
        for (size_t qi = 0; qi < pdofs.size(); ++qi) {
            for (int j = 0; j < nl; ++j) {
                const int gj = vdofs[j];
                const int rj = reduced[gj];
                if (rj >= 0) {
                    b_trip.emplace_back(pdofs[qi], rj, lm.div_coupling(static_cast<int>(qi), j));
                } else {
                    sys.G(pdofs[qi]) += lm.div_coupling(static_cast<int>(qi), j) * sys.g_lift(gj);
                }
            }
        }
        // pressure mean vector: |T| for P0, |T|/3 per vertex hat for P1
        if (pressure_space(m) == PressureSpace::P0) {
            sys.c(pdofs[0]) += geom.tri[tri].area;
        } else {
            for (int k = 0; k < 3; ++k) sys.c(pdofs[k]) += geom.tri[tri].area / 3.0;
        }
    }

    sys.A.resize(ni, ni);
    sys.A.setFromTriplets(a_trip.begin(), a_trip.end());
    sys.B.resize(dm.n_pressure, ni);
    sys.B.setFromTriplets(b_trip.begin(), b_trip.end());
    return sys;
}

}  // namespace stokeslab
