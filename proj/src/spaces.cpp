#include "stokeslab/spaces.hpp"

#include <algorithm>
#include <stdexcept>

#include "stokeslab/quadrature.hpp"

namespace stokeslab {

std::string method_name(Method m) {
    switch (m) {
        case Method::CR: return "cr";
        case Method::MINI: return "mini";
        case Method::P2P0: return "p2p0";
        case Method::BR: return "br";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "cr") return Method::CR;
    if (name == "mini") return Method::MINI;
    if (name == "p2p0") return Method::P2P0;
    if (name == "br") return Method::BR;
    throw std::invalid_argument("unknown method: " + name);
}

DofMap build_dofmap(const Triangulation& t, Method m) {
    DofMap dm;
    dm.method = m;
    const int nv = t.num_vertices();
    const int ne = t.num_edges();
    const int nt = t.num_triangles();

    switch (m) {
        case Method::CR:
            dm.n_scalar = ne;
            dm.n_velocity = 2 * ne;
            dm.n_pressure = nt;
            dm.velocity_on_boundary.assign(dm.n_velocity, false);
            for (int e = 0; e < ne; ++e) {
                if (t.edges[e].boundary) {
                    dm.velocity_on_boundary[e] = true;
                    dm.velocity_on_boundary[ne + e] = true;
                }
            }
            break;
        case Method::MINI:
            dm.n_scalar = nv + nt;
            dm.n_velocity = 2 * (nv + nt);
            dm.n_pressure = nv;
            dm.velocity_on_boundary.assign(dm.n_velocity, false);
            for (int v = 0; v < nv; ++v) {
                if (t.vertex_on_boundary[v]) {
                    dm.velocity_on_boundary[v] = true;
                    dm.velocity_on_boundary[dm.n_scalar + v] = true;
                }
            }
            break;
        case Method::P2P0:
            dm.n_scalar = nv + ne;
            dm.n_velocity = 2 * (nv + ne);
            dm.n_pressure = nt;
            dm.velocity_on_boundary.assign(dm.n_velocity, false);
            for (int v = 0; v < nv; ++v) {
                if (t.vertex_on_boundary[v]) {
                    dm.velocity_on_boundary[v] = true;
                    dm.velocity_on_boundary[dm.n_scalar + v] = true;
                }
            }
            for (int e = 0; e < ne; ++e) {
                if (t.edges[e].boundary) {
                    dm.velocity_on_boundary[nv + e] = true;
                    dm.velocity_on_boundary[dm.n_scalar + nv + e] = true;
                }
            }
            break;
        case Method::BR: {
            // Free unknowns are vertex components plus one bubble per interior
            // edge. Boundary-edge bubbles exist as Dirichlet-classified dofs:
            // they carry the normal-flux part of inhomogeneous data, which
            // keeps the lifted solution elementwise mass-conservative.
            dm.n_scalar = nv;
            dm.edge_bubble_dof.assign(ne, -1);
            for (int e = 0; e < ne; ++e) dm.edge_bubble_dof[e] = 2 * nv + e;
            dm.n_velocity = 2 * nv + ne;
            dm.n_pressure = nt;
            dm.velocity_on_boundary.assign(dm.n_velocity, false);
            for (int v = 0; v < nv; ++v) {
                if (t.vertex_on_boundary[v]) {
                    dm.velocity_on_boundary[v] = true;
                    dm.velocity_on_boundary[nv + v] = true;
                }
            }
            for (int e = 0; e < ne; ++e) {
                if (t.edges[e].boundary) dm.velocity_on_boundary[2 * nv + e] = true;
            }
            break;
        }
    }

    for (int i = 0; i < dm.n_velocity; ++i) {
        if (!dm.velocity_on_boundary[i]) dm.interior.push_back(i);
    }
    return dm;
}

LocalBasis eval_basis(const Triangulation& t, const MeshGeometry& geom, Method m, int tri,
                      const std::array<double, 3>& bary) {
    LocalBasis lb;
    const auto g = barycentric_gradients(t, tri);
    const auto& l = bary;

    auto add_scalar_pair = [&lb](int n, const std::array<double, 6>& v, const std::array<Vec2, 6>& gv) {
        for (int k = 0; k < n; ++k) {
            lb.value[k] = {v[k], 0.0};
            lb.grad[k] = {gv[k].x, gv[k].y, 0.0, 0.0};
            lb.value[n + k] = {0.0, v[k]};
            lb.grad[n + k] = {0.0, 0.0, gv[k].x, gv[k].y};
        }
        lb.n_vel = 2 * n;
    };

    switch (m) {
        case Method::CR: {
            std::array<double, 6> v{};
            std::array<Vec2, 6> gv{};
            for (int k = 0; k < 3; ++k) {
                v[k] = 1.0 - 2.0 * l[k];
                gv[k] = g[k] * -2.0;
            }
            add_scalar_pair(3, v, gv);
            break;
        }
        case Method::MINI: {
            std::array<double, 6> v{};
            std::array<Vec2, 6> gv{};
            for (int k = 0; k < 3; ++k) {
                v[k] = l[k];
                gv[k] = g[k];
            }
            v[3] = l[0] * l[1] * l[2];
            gv[3] = g[0] * (l[1] * l[2]) + g[1] * (l[0] * l[2]) + g[2] * (l[0] * l[1]);
            add_scalar_pair(4, v, gv);
            break;
        }
        case Method::P2P0: {
            std::array<double, 6> v{};
            std::array<Vec2, 6> gv{};
            for (int k = 0; k < 3; ++k) {
                v[k] = l[k] * (2.0 * l[k] - 1.0);
                gv[k] = g[k] * (4.0 * l[k] - 1.0);
            }
            for (int k = 0; k < 3; ++k) {
                const int i = (k + 1) % 3, j = (k + 2) % 3;
                v[3 + k] = 4.0 * l[i] * l[j];
                gv[3 + k] = (g[i] * l[j] + g[j] * l[i]) * 4.0;
            }
            add_scalar_pair(6, v, gv);
            break;
        }
        case Method::BR: {
            std::array<double, 6> v{};
            std::array<Vec2, 6> gv{};
            for (int k = 0; k < 3; ++k) {
                v[k] = l[k];
                gv[k] = g[k];
            }
            add_scalar_pair(3, v, gv);
            // Edge bubbles lambda_i lambda_j nu_E; the globally fixed normal
            // direction makes the field single-valued across the edge.
            for (int k = 0; k < 3; ++k) {
                const int e = t.tri_edges[tri][k];
                const int i = (k + 1) % 3, j = (k + 2) % 3;
                const Vec2 nu = geom.edge[e].normal;
                const double s = l[i] * l[j];
                const Vec2 gs = g[i] * l[j] + g[j] * l[i];
                lb.value[lb.n_vel] = nu * s;
                lb.grad[lb.n_vel] = {nu.x * gs.x, nu.x * gs.y, nu.y * gs.x, nu.y * gs.y};
                ++lb.n_vel;
            }
            break;
        }
    }

    if (pressure_space(m) == PressureSpace::P0) {
        lb.n_pre = 1;
        lb.pvalue[0] = 1.0;
    } else {
        lb.n_pre = 3;
        lb.pvalue = {l[0], l[1], l[2]};
    }
    return lb;
}

LocalBasis eval_basis(const Triangulation& t, Method m, int tri, const std::array<double, 3>& bary) {
    return eval_basis(t, geometry(t), m, tri, bary);
}

void velocity_element_dofs(const Triangulation& t, const DofMap& dm, int tri, std::vector<int>& out) {
    out.clear();
    const auto& v = t.triangles[tri].v;
    const auto& te = t.tri_edges[tri];
    switch (dm.method) {
        case Method::CR:
            for (int k = 0; k < 3; ++k) out.push_back(te[k]);
            for (int k = 0; k < 3; ++k) out.push_back(dm.n_scalar + te[k]);
            break;
        case Method::MINI:
            for (int k = 0; k < 3; ++k) out.push_back(v[k]);
            out.push_back(t.num_vertices() + tri);
            for (int k = 0; k < 3; ++k) out.push_back(dm.n_scalar + v[k]);
            out.push_back(dm.n_scalar + t.num_vertices() + tri);
            break;
        case Method::P2P0:
            for (int k = 0; k < 3; ++k) out.push_back(v[k]);
            for (int k = 0; k < 3; ++k) out.push_back(t.num_vertices() + te[k]);
            for (int k = 0; k < 3; ++k) out.push_back(dm.n_scalar + v[k]);
            for (int k = 0; k < 3; ++k) out.push_back(dm.n_scalar + t.num_vertices() + te[k]);
            break;
        case Method::BR:
            for (int k = 0; k < 3; ++k) out.push_back(v[k]);
            for (int k = 0; k < 3; ++k) out.push_back(dm.n_scalar + v[k]);
            for (int k = 0; k < 3; ++k) out.push_back(dm.edge_bubble_dof[te[k]]);
            break;
    }
}

void pressure_element_dofs(const Triangulation& t, const DofMap& dm, int tri, std::vector<int>& out) {
    out.clear();
    if (pressure_space(dm.method) == PressureSpace::P0) {
        out.push_back(tri);
    } else {
        for (int k = 0; k < 3; ++k) out.push_back(t.triangles[tri].v[k]);
    }
}

std::vector<double> interpolate_boundary(const Triangulation& t, const MeshGeometry& geom, Method m,
                                         const BoundaryTrace& g, int edge_quad_degree) {
    const DofMap dm = build_dofmap(t, m);
    std::vector<double> coeffs(dm.n_velocity, 0.0);
    const int nv = t.num_vertices();

    auto set_vertex_values = [&](int x_offset, int y_offset) {
        for (int v = 0; v < nv; ++v) {
            if (!t.vertex_on_boundary[v]) continue;
            const Vec2 gv = g(t.vertices[v].pos());
            coeffs[x_offset + v] = gv.x;
            coeffs[y_offset + v] = gv.y;
        }
    };

    switch (m) {
        case Method::CR: {
            const EdgeRule& rule = edge_rule(edge_quad_degree);
            for (int e = 0; e < t.num_edges(); ++e) {
                if (!t.edges[e].boundary) continue;
                const Vec2 a = t.vertices[t.edges[e].a].pos();
                const Vec2 b = t.vertices[t.edges[e].b].pos();
                const Vec2 mean = integrate_edge<Vec2>(a, b, g, rule) / geom.edge[e].length;
                coeffs[e] = mean.x;
                coeffs[dm.n_scalar + e] = mean.y;
            }
            break;
        }
        case Method::MINI:
            set_vertex_values(0, dm.n_scalar);
            break;
        case Method::P2P0: {
            // Midpoint values, with the normal component adjusted so the edge
            // flux of the trace matches int_E g.nu exactly (Simpson weights);
            // this keeps the lifted solution elementwise mass-conservative.
            set_vertex_values(0, dm.n_scalar);
            const EdgeRule& rule = edge_rule(edge_quad_degree);
            for (int e = 0; e < t.num_edges(); ++e) {
                if (!t.edges[e].boundary) continue;
                const Vec2 a = t.vertices[t.edges[e].a].pos();
                const Vec2 b = t.vertices[t.edges[e].b].pos();
                const Vec2 nu = geom.edge[e].normal;
                const double len = geom.edge[e].length;
                Vec2 gv = g(geom.edge[e].midpoint);
                const double flux = integrate_edge<double>(
                    a, b, [&](Vec2 x) { return g(x).dot(nu); }, rule);
                const double simpson =
                    len / 6.0 * (g(a).dot(nu) + 4.0 * gv.dot(nu) + g(b).dot(nu));
                gv += nu * ((flux - simpson) * 1.5 / len);
                coeffs[nv + e] = gv.x;
                coeffs[dm.n_scalar + nv + e] = gv.y;
            }
            break;
        }
        case Method::BR: {
            // Vertex values plus boundary edge bubbles matching int_E g.nu,
            // the classical flux-preserving interpolation for this element.
            set_vertex_values(0, nv);
            const EdgeRule& rule = edge_rule(edge_quad_degree);
            for (int e = 0; e < t.num_edges(); ++e) {
                if (!t.edges[e].boundary) continue;
                const Vec2 a = t.vertices[t.edges[e].a].pos();
                const Vec2 b = t.vertices[t.edges[e].b].pos();
                const Vec2 nu = geom.edge[e].normal;
                const double len = geom.edge[e].length;
                const double flux = integrate_edge<double>(
                    a, b, [&](Vec2 x) { return g(x).dot(nu); }, rule);
                const double p1_flux = 0.5 * len * (g(a) + g(b)).dot(nu);
                coeffs[dm.edge_bubble_dof[e]] = (flux - p1_flux) * 6.0 / len;
            }
            break;
        }
    }
    return coeffs;
}

}  // namespace stokeslab
