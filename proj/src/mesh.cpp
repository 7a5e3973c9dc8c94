#include "stokeslab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace stokeslab {

std::string domain_name(Domain d) {
    switch (d) {
        case Domain::square: return "square";
        case Domain::rhombus: return "rhombus";
        case Domain::lshape: return "lshape";
        case Domain::custom: return "custom";
    }
    return "custom";
}

Domain domain_from_name(const std::string& name) {
    if (name == "square") return Domain::square;
    if (name == "rhombus") return Domain::rhombus;
    if (name == "lshape") return Domain::lshape;
    if (name == "custom") return Domain::custom;
    throw std::invalid_argument("unknown domain: " + name);
}

double domain_area(Domain d) {
    switch (d) {
        case Domain::square: return 4.0;
        case Domain::rhombus: return 2.0;
        case Domain::lshape: return 3.0;
        case Domain::custom: return -1.0;
    }
    return -1.0;
}

int Triangulation::num_boundary_edges() const {
    int n = 0;
    for (const Edge& e : edges) n += e.boundary ? 1 : 0;
    return n;
}

std::array<Vec2, 3> Triangulation::triangle_coords(int t) const {
    const Triangle& tr = triangles[t];
    return {vertices[tr.v[0]].pos(), vertices[tr.v[1]].pos(), vertices[tr.v[2]].pos()};
}

double Triangulation::signed_area(int t) const {
    const auto p = triangle_coords(t);
    return 0.5 * cross(p[1] - p[0], p[2] - p[0]);
}

namespace {

// Signed distance check: is x on the boundary polygon of the tagged domain?
bool on_segment(Vec2 x, Vec2 a, Vec2 b, double tol) {
    const Vec2 ab = b - a;
    const Vec2 ax = x - a;
    if (std::abs(cross(ab, ax)) > tol * ab.norm()) return false;
    const double s = ax.dot(ab) / ab.dot(ab);
    return s >= -tol && s <= 1.0 + tol;
}

std::vector<std::pair<Vec2, Vec2>> domain_boundary_segments(Domain d) {
    switch (d) {
        case Domain::square:
            return {{{-1, -1}, {1, -1}}, {{1, -1}, {1, 1}}, {{1, 1}, {-1, 1}}, {{-1, 1}, {-1, -1}}};
        case Domain::rhombus:
            return {{{1, 0}, {0, 1}}, {{0, 1}, {-1, 0}}, {{-1, 0}, {0, -1}}, {{0, -1}, {1, 0}}};
        case Domain::lshape:
            return {{{0, 0}, {1, 0}},  {{1, 0}, {1, 1}},    {{1, 1}, {-1, 1}},
                    {{-1, 1}, {-1, -1}}, {{-1, -1}, {0, -1}}, {{0, -1}, {0, 0}}};
        case Domain::custom:
            return {};
    }
    return {};
}

}  // namespace

void Triangulation::finalize() {
    const int nv = num_vertices();
    const int nt = num_triangles();
    if (nv < 3 || nt < 1) throw std::runtime_error("mesh: too few entities");

    for (const Vertex& v : vertices) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw std::runtime_error("mesh: non-finite vertex");
    }
    for (int t = 0; t < nt; ++t) {
        const auto& v = triangles[t].v;
        if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2]) throw std::runtime_error("mesh: degenerate triangle");
        for (int k = 0; k < 3; ++k) {
            if (v[k] < 0 || v[k] >= nv) throw std::runtime_error("mesh: vertex index out of range");
        }
        if (signed_area(t) <= 0.0) throw std::runtime_error("mesh: triangle not counterclockwise");
    }

    edges.clear();
    tri_edges.assign(nt, {-1, -1, -1});
    std::map<std::pair<int, int>, int> edge_of;
    for (int t = 0; t < nt; ++t) {
        const auto& v = triangles[t].v;
        for (int k = 0; k < 3; ++k) {
            const int a = std::min(v[(k + 1) % 3], v[(k + 2) % 3]);
            const int b = std::max(v[(k + 1) % 3], v[(k + 2) % 3]);
            auto [it, fresh] = edge_of.try_emplace({a, b}, num_edges());
            if (fresh) {
                Edge e;
                e.a = a;
                e.b = b;
                e.tri = {t, -1};
                edges.push_back(e);
            } else {
                Edge& e = edges[it->second];
                if (e.tri[1] != -1) throw std::runtime_error("mesh: edge shared by more than two triangles");
                e.tri[1] = t;
            }
            tri_edges[t][k] = it->second;
        }
    }

    vertex_on_boundary.assign(nv, false);
    for (Edge& e : edges) {
        e.boundary = (e.tri[1] == -1);
        if (e.boundary) {
            vertex_on_boundary[e.a] = true;
            vertex_on_boundary[e.b] = true;
        }
    }

    // Euler formula for a simply connected planar mesh with boundary; this also
    // rules out hanging nodes for meshes built from the factories here.
    if (nv - num_edges() + nt != 1) throw std::runtime_error("mesh: Euler formula violated (non-conforming?)");

    if (domain != Domain::custom) {
        const auto segs = domain_boundary_segments(domain);
        const MeshGeometry g = geometry(*this);
        for (int e = 0; e < num_edges(); ++e) {
            if (!edges[e].boundary) continue;
            const Vec2 m = g.edge[e].midpoint;
            bool ok = false;
            for (const auto& [a, b] : segs) ok = ok || on_segment(m, a, b, 1e-12);
            if (!ok) throw std::runtime_error("mesh: boundary edge off the domain boundary");
        }
    }
}

Triangulation make_square() {
    Triangulation t;
    t.domain = Domain::square;
    t.vertices = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {0, 0}};
    t.triangles = {{{0, 1, 4}}, {{1, 2, 4}}, {{2, 3, 4}}, {{3, 0, 4}}};
    t.finalize();
    return t;
}

Triangulation make_rhombus() {
    Triangulation t;
    t.domain = Domain::rhombus;
    t.vertices = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    // The two triangles conv{(0,1),(0,-1),(1,0)} and conv{(0,-1),(0,1),(-1,0)}.
    t.triangles = {{{1, 3, 0}}, {{3, 1, 2}}};
    t.finalize();
    return t;
}

Triangulation make_lshape() {
    Triangulation t;
    t.domain = Domain::lshape;
    t.vertices = {{-1, -1}, {0, -1}, {0, 0}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}};
    // Three unit squares, each split by the diagonal through the re-entrant
    // corner (0,0) so that every triangle touches the singular vertex.
    t.triangles = {{{0, 1, 2}}, {{0, 2, 3}}, {{3, 2, 4}}, {{2, 5, 4}}, {{2, 7, 6}}, {{2, 6, 5}}};
    t.finalize();
    return t;
}

Triangulation make_domain(Domain d) {
    switch (d) {
        case Domain::square: return make_square();
        case Domain::rhombus: return make_rhombus();
        case Domain::lshape: return make_lshape();
        case Domain::custom: break;
    }
    throw std::invalid_argument("make_domain: no factory for custom domains");
}

Triangulation red_refine(const Triangulation& t) {
    Triangulation r;
    r.domain = t.domain;
    r.level = t.level + 1;
    r.vertices = t.vertices;

    // One new vertex per parent edge.
    std::vector<int> midpoint_vertex(t.num_edges());
    for (int e = 0; e < t.num_edges(); ++e) {
        const Vec2 a = t.vertices[t.edges[e].a].pos();
        const Vec2 b = t.vertices[t.edges[e].b].pos();
        midpoint_vertex[e] = r.num_vertices();
        r.vertices.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
    }

    r.triangles.reserve(4 * t.num_triangles());
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        const auto& v = t.triangles[tri].v;
        const auto& te = t.tri_edges[tri];
        const int m0 = midpoint_vertex[te[0]];  // opposite v0 = mid(v1,v2)
        const int m1 = midpoint_vertex[te[1]];
        const int m2 = midpoint_vertex[te[2]];
        r.triangles.push_back({{v[0], m2, m1}});
        r.triangles.push_back({{v[1], m0, m2}});
        r.triangles.push_back({{v[2], m1, m0}});
        r.triangles.push_back({{m0, m1, m2}});
    }
    r.finalize();
    return r;
}

MeshGeometry geometry(const Triangulation& t) {
    MeshGeometry g;
    g.tri.resize(t.num_triangles());
    g.edge.resize(t.num_edges());

    for (int i = 0; i < t.num_triangles(); ++i) {
        const auto p = t.triangle_coords(i);
        TriGeometry& tg = g.tri[i];
        tg.area = 0.5 * cross(p[1] - p[0], p[2] - p[0]);
        tg.centroid = (p[0] + p[1] + p[2]) / 3.0;
        tg.diameter = std::max({(p[1] - p[0]).norm(), (p[2] - p[1]).norm(), (p[0] - p[2]).norm()});
        g.total_area += tg.area;
        g.max_diameter = std::max(g.max_diameter, tg.diameter);
    }

    for (int e = 0; e < t.num_edges(); ++e) {
        const Edge& ed = t.edges[e];
        const Vec2 a = t.vertices[ed.a].pos();
        const Vec2 b = t.vertices[ed.b].pos();
        EdgeGeometry& eg = g.edge[e];
        eg.midpoint = 0.5 * (a + b);
        eg.length = (b - a).norm();
        Vec2 n = perp(b - a) / eg.length;
        // Orient out of the lower-indexed adjacent triangle.
        if (n.dot(eg.midpoint - g.tri[ed.tri[0]].centroid) < 0.0) n = -n;
        eg.normal = n;
    }
    return g;
}

std::array<Vec2, 3> barycentric_gradients(const Triangulation& t, int tri) {
    const auto p = t.triangle_coords(tri);
    const double inv2A = 1.0 / (2.0 * t.signed_area(tri));
    return {perp(p[2] - p[1]) * inv2A, perp(p[0] - p[2]) * inv2A, perp(p[1] - p[0]) * inv2A};
}

std::array<double, 3> barycentric_of(const Triangulation& t, int tri, Vec2 x) {
    const auto p = t.triangle_coords(tri);
    const double inv2A = 1.0 / (2.0 * t.signed_area(tri));
    const double l1 = cross(x - p[0], p[2] - p[0]) * inv2A;
    const double l2 = cross(p[1] - p[0], x - p[0]) * inv2A;
    return {1.0 - l1 - l2, l1, l2};
}

void dump_mesh(const Triangulation& t, std::ostream& os) {
    os << t.num_vertices() << ' ' << t.num_edges() << ' ' << t.num_triangles() << '\n';
    os << std::setprecision(17);
    for (const Vertex& v : t.vertices) os << v.x << ' ' << v.y << '\n';
    for (const Edge& e : t.edges) os << e.a << ' ' << e.b << ' ' << (e.boundary ? 1 : 0) << '\n';
    for (const Triangle& tr : t.triangles) os << tr.v[0] << ' ' << tr.v[1] << ' ' << tr.v[2] << '\n';
}

void dump_mesh_file(const Triangulation& t, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    dump_mesh(t, os);
}

Triangulation load_mesh(std::istream& is) {
    int nv = 0, ne = 0, nt = 0;
    if (!(is >> nv >> ne >> nt)) throw std::runtime_error("mesh load: bad header");
    Triangulation t;
    t.vertices.resize(nv);
    for (Vertex& v : t.vertices) {
        if (!(is >> v.x >> v.y)) throw std::runtime_error("mesh load: bad vertex line");
    }
    std::vector<std::array<int, 3>> stored_edges(ne);
    for (auto& e : stored_edges) {
        if (!(is >> e[0] >> e[1] >> e[2])) throw std::runtime_error("mesh load: bad edge line");
    }
    t.triangles.resize(nt);
    for (Triangle& tr : t.triangles) {
        if (!(is >> tr.v[0] >> tr.v[1] >> tr.v[2])) throw std::runtime_error("mesh load: bad triangle line");
    }
    t.finalize();  // rebuilds edges/adjacency from triangles
    if (t.num_edges() != ne) throw std::runtime_error("mesh load: edge count mismatch");
    for (const auto& e : stored_edges) {
        const int a = std::min(e[0], e[1]), b = std::max(e[0], e[1]);
        const bool found = std::any_of(t.edges.begin(), t.edges.end(), [&](const Edge& ed) {
            return ed.a == a && ed.b == b && int(ed.boundary) == e[2];
        });
        if (!found) throw std::runtime_error("mesh load: stored edge inconsistent with triangles");
    }
    return t;
}

Triangulation load_mesh_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return load_mesh(is);
}

}  // namespace stokeslab
