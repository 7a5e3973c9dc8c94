#include <cmath>
#include <random>

#include "doctest.h"
#include "stokeslab/checks.hpp"
#include "stokeslab/companions.hpp"
#include "stokeslab/experiments.hpp"

using namespace stokeslab;

namespace {

// CR coefficients of the continuous piecewise affine field with the given
// vertex values: the dof on each edge is the midpoint value.
Eigen::VectorXd cr_from_vertex_values(const Triangulation& t, const std::vector<double>& vals) {
    Eigen::VectorXd c(t.num_edges());
    for (int e = 0; e < t.num_edges(); ++e) {
        c(e) = 0.5 * (vals[t.edges[e].a] + vals[t.edges[e].b]);
    }
    return c;
}

}  // namespace

TEST_CASE("bubble normalizations: mean of b_E and b_T equal one") {
    const auto [be, bt] = bubble_normalization_errors();
    CHECK(be <= 1e-13);
    CHECK(bt <= 1e-13);
}

TEST_CASE("pi0 examples") {
    Triangulation t;
    t.vertices = {{0, 0}, {1, 0}, {0, 1}};
    t.triangles = {{{0, 1, 2}}};
    t.finalize();

    const auto px = pi0<double>(t, [](Vec2 p) { return p.x; });
    CHECK(px[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    const auto pc = pi0<double>(t, [](Vec2) { return 4.25; });
    CHECK(pc[0] == doctest::Approx(4.25).epsilon(1e-14));

    // colliding-flow pressure: global mean of Pi0 p vanishes (the -32/6 shift)
    const Triangulation sq = red_refine(make_square());
    const ExactSolution ex = colliding_flow();
    const auto pp = pi0<double>(sq, ex.p, 8);
    const MeshGeometry g = geometry(sq);
    double mean = 0.0;
    for (int tri = 0; tri < sq.num_triangles(); ++tri) mean += g.tri[tri].area * pp[tri];
    CHECK(mean == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("inc_interpolate reproduces affine fields and known edge means") {
    const Triangulation t = red_refine(make_square());
    const auto v = [](Vec2 p) { return Vec2{1.0 + 2.0 * p.x - p.y, 0.5 * p.x + 3.0 * p.y}; };
    const Eigen::VectorXd c = inc_interpolate(t, v);
    const MeshGeometry g = geometry(t);
    for (int e = 0; e < t.num_edges(); ++e) {
        CHECK(c(e) == doctest::Approx(v(g.edge[e].midpoint).x).epsilon(1e-13));
        CHECK(c(t.num_edges() + e) == doctest::Approx(v(g.edge[e].midpoint).y).epsilon(1e-13));
    }

    // v = (x^2, 0): dof on the edge from (1,0) to (0,1) is the mean of x^2 = 1/3
    Triangulation ref;
    ref.vertices = {{0, 0}, {1, 0}, {0, 1}};
    ref.triangles = {{{0, 1, 2}}};
    ref.finalize();
    const Eigen::VectorXd c2 = inc_interpolate(ref, [](Vec2 p) { return Vec2{p.x * p.x, 0.0}; });
    for (int e = 0; e < ref.num_edges(); ++e) {
        if (ref.edges[e].a == 1 && ref.edges[e].b == 2) {
            CHECK(c2(e) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("gradient identity grad_NC(I_NC v) = Pi0 grad v") {
    const ExactSolution ex = colliding_flow();
    Triangulation t = make_square();
    for (int level = 0; level <= 2; ++level) {
        if (level > 0) t = red_refine(t);
        CHECK(inc_identity_residual(t, ex.u, ex.grad_u, 10) <= 1e-10);
    }

    std::mt19937 rng(42);
    const Triangulation t1 = red_refine(make_square());
    for (int s = 0; s < 5; ++s) {
        const PolynomialField f = random_polynomial_field(rng, 5);
        const auto v = [&f](Vec2 p) { return f.value(p); };
        const auto gv = [&f](Vec2 p) { return f.gradient(p); };
        CHECK(inc_identity_residual(t1, v, gv, 12) <= 1e-10);
    }
}

TEST_CASE("J1 averages element traces; boundary vertices stay zero") {
    SUBCASE("all-boundary mesh: J1 is identically zero") {
        const Triangulation t = make_rhombus();
        std::mt19937 rng(1);
        const Eigen::VectorXd v = random_cr_field(t, rng);
        const CompanionField J = j1(t, v);
        CHECK(J.vertex.cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("interior vertex of the refined rhombus averages its element traces") {
        // (0,0) is the midpoint of the parent interior edge: 3 children per
        // adjacent parent triangle contain it, 6 in total.
        const Triangulation t = red_refine(make_rhombus());
        std::mt19937 rng(2);
        const Eigen::VectorXd v = random_cr_field(t, rng);
        const CompanionField J = j1(t, v);

        int z = -1;
        for (int i = 0; i < t.num_vertices(); ++i) {
            if (!t.vertex_on_boundary[i]) z = i;
        }
        REQUIRE(z >= 0);
        CHECK(t.vertices[z].x == doctest::Approx(0.0));
        CHECK(t.vertices[z].y == doctest::Approx(0.0));

        double sum = 0.0;
        int count = 0;
        for (int tri = 0; tri < t.num_triangles(); ++tri) {
            for (int k = 0; k < 3; ++k) {
                if (t.triangles[tri].v[k] == z) {
                    std::array<double, 3> bary{0, 0, 0};
                    bary[k] = 1.0;
                    sum += cr_value(t, tri, bary, v);
                    ++count;
                }
            }
        }
        CHECK(count == 6);
        CHECK(J.vertex(z) == doctest::Approx(sum / count).epsilon(1e-13));
    }

    SUBCASE("continuous P1 fields are fixed points of J1 and J3") {
        const Triangulation t = red_refine(make_lshape());
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> vals(t.num_vertices(), 0.0);
        for (int i = 0; i < t.num_vertices(); ++i) {
            if (!t.vertex_on_boundary[i]) vals[i] = dist(rng);
        }
        const Eigen::VectorXd v = cr_from_vertex_values(t, vals);
        const CompanionField J1 = j1(t, v);
        for (int i = 0; i < t.num_vertices(); ++i) {
            CHECK(J1.vertex(i) == doctest::Approx(vals[i]).epsilon(1e-12));
        }
        const CompanionField J3 = j3(t, v);
        CHECK(J3.edge_bubble.cwiseAbs().maxCoeff() <= 1e-13);
        CHECK(J3.elem_bubble.cwiseAbs().maxCoeff() <= 1e-13);
    }
}

TEST_CASE("J2 reproduces interior edge means") {
    const Triangulation t = red_refine(make_square());
    std::mt19937 rng(4);
    const Eigen::VectorXd v = random_cr_field(t, rng);
    const CompanionField J2 = j2(t, v);
    const EdgeRule& rule = edge_rule(5);
    for (int e = 0; e < t.num_edges(); ++e) {
        if (t.edges[e].boundary) continue;
        const int tri = t.edges[e].tri[0];
        const Vec2 a = t.vertices[t.edges[e].a].pos();
        const Vec2 b = t.vertices[t.edges[e].b].pos();
        double mean_v = 0.0, mean_j = 0.0;
        for (const auto& q : rule.points) {
            const Vec2 x = a + (b - a) * q.s;
            const auto l = barycentric_of(t, tri, x);
            mean_v += q.weight * cr_value(t, tri, l, v);
            mean_j += q.weight * J2.value(t, tri, l);
        }
        CHECK(mean_j == doctest::Approx(mean_v).epsilon(1e-12));
    }
}

TEST_CASE("conservation properties on random CR fields") {
    for (Domain d : {Domain::square, Domain::rhombus, Domain::lshape}) {
        const Triangulation t = red_refine(red_refine(make_domain(d)));
        const CompanionCheck c = check_companions(t, 20, 1234);
        CHECK(c.max_conservation_residual <= 1e-10);
        CHECK(c.max_mean_residual <= 1e-10);
        CHECK(c.max_stability_constant < 10.0);
    }
}

TEST_CASE("companion stability constants stay bounded under refinement") {
    Triangulation t = make_square();
    double prev = 0.0;
    for (int level = 0; level <= 3; ++level) {
        if (level > 0) t = red_refine(t);
        const CompanionCheck c = check_companions(t, 10, 99);
        CHECK(c.max_stability_constant < 10.0);
        if (level > 0) CHECK(c.max_stability_constant < 2.0 * std::max(prev, 1.0));
        prev = c.max_stability_constant;
    }
}

TEST_CASE("vector companions act componentwise") {
    const Triangulation t = red_refine(make_square());
    std::mt19937 rng(6);
    const Eigen::VectorXd v = random_cr_field(t, rng, true);
    const int ne = t.num_edges();
    const VectorCompanionField J = j3_vec(t, v);
    const CompanionField Jx = j3(t, v.head(ne));
    const CompanionField Jy = j3(t, v.tail(ne));
    CHECK((J.x.vertex - Jx.vertex).cwiseAbs().maxCoeff() == 0.0);
    CHECK((J.y.elem_bubble - Jy.elem_bubble).cwiseAbs().maxCoeff() == 0.0);
    // conservation holds per component for the stacked field as well
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        CHECK(integral_grad_diff(t, tri, v.head(ne), J.x).norm() <= 1e-12);
        CHECK(integral_grad_diff(t, tri, v.tail(ne), J.y).norm() <= 1e-12);
    }
}

TEST_CASE("companions vanish on the domain boundary") {
    const Triangulation t = red_refine(make_lshape());
    std::mt19937 rng(5);
    const Eigen::VectorXd v = random_cr_field(t, rng);
    const CompanionField J = j3(t, v);
    const EdgeRule& rule = edge_rule(5);
    for (int e = 0; e < t.num_edges(); ++e) {
        if (!t.edges[e].boundary) continue;
        const int tri = t.edges[e].tri[0];
        const Vec2 a = t.vertices[t.edges[e].a].pos();
        const Vec2 b = t.vertices[t.edges[e].b].pos();
        for (const auto& q : rule.points) {
            const Vec2 x = a + (b - a) * q.s;
            CHECK(std::abs(J.value(t, tri, barycentric_of(t, tri, x))) <= 1e-13);
        }
    }
}
