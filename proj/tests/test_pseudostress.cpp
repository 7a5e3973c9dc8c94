#include <cmath>

#include "doctest.h"
#include "stokeslab/checks.hpp"
#include "stokeslab/companions.hpp"
#include "stokeslab/pseudostress.hpp"

using namespace stokeslab;

TEST_CASE("zero data gives the zero pseudostress") {
    const Triangulation t = red_refine(make_square());
    const PseudostressResult ps = ps_from_cr(t, zero_source(), nullptr);
    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        CHECK(ps.field.value(tri, geometry(t).tri[tri].centroid).frobenius2() <= 1e-24);
    }
}

TEST_CASE("affine divergence-free exact solution is reproduced") {
    ExactSolution ex;
    ex.domain = Domain::square;
    ex.degree = 1;
    ex.u = [](Vec2 p) { return Vec2{-p.y, p.x}; };
    ex.grad_u = [](Vec2) { return Mat2{0, -1, 1, 0}; };
    ex.p = [](Vec2) { return 0.0; };
    ex.f = zero_source();
    const Triangulation t = red_refine(make_square());
    const PseudostressResult ps = ps_from_cr(t, ex.f, ex.dirichlet());
    const auto [dev_err, tr_err] = ps_errors(t, ps.field, ex);
    CHECK(dev_err <= 1e-10);
    CHECK(tr_err <= 1e-10);
}

TEST_CASE("representation terms on the rhombus with f=(1,0)") {
    const Triangulation t = make_rhombus();
    SourceField f;
    f.f = [](Vec2) { return Vec2{1.0, 0.0}; };
    f.degree = 0;
    const PseudostressResult ps = ps_from_cr(t, f, nullptr);
    const MeshGeometry g = geometry(t);
    const int ne = t.num_edges();

    for (int tri = 0; tri < t.num_triangles(); ++tri) {
        // term-by-term: sigma(x) = grad u~ - (f/2)(x)(x - mid) - p~ I, Pi0 f = f here
        const Vec2 gx = cr_gradient(t, tri, ps.tilde_solution.velocity.head(ne));
        const Vec2 gy = cr_gradient(t, tri, ps.tilde_solution.velocity.tail(ne));
        const double ptilde = ps.tilde_solution.pressure(tri);
        const Vec2 probe{0.31 * (tri == 0 ? 1.0 : -1.0), -0.17};
        const Mat2 expected = Mat2{gx.x, gx.y, gy.x, gy.y} -
                              outer(Vec2{0.5, 0.0}, probe - g.tri[tri].centroid) -
                              identity2(ptilde);
        const Mat2 got = ps.field.value(tri, probe);
        CHECK((got - expected).frobenius2() <= 1e-24);

        // div_NC u~ = 0, so dev sigma = grad u~ - dev((f/2)(x)(x-mid))
        CHECK(gx.x + gy.y == doctest::Approx(0.0).epsilon(1e-12));
        const Mat2 dev_expected =
            Mat2{gx.x, gx.y, gy.x, gy.y} - outer(Vec2{0.5, 0.0}, probe - g.tri[tri].centroid).deviatoric();
        CHECK((got.deviatoric() - dev_expected).frobenius2() <= 1e-22);

        // trace part: tr sigma / 2 = -p~ - Pi0 f . (x - mid) / 4
        const double tr_expected = -ptilde - 0.25 * Vec2{1.0, 0.0}.dot(probe - g.tri[tri].centroid);
        CHECK(0.5 * got.trace() == doctest::Approx(tr_expected).epsilon(1e-12));
    }

    CHECK(std::abs(ps_trace_integral(t, ps.field)) <= 1e-10);
}

TEST_CASE("pseudostress comparison quantities on the colliding flow") {
    const auto sweep = pseudostress_sweep(colliding_flow(), 2);
    for (const auto& pl : sweep) {
        CHECK(std::abs(pl.trace_integral) <= 1e-10);
        // f = 0: the tilde solve coincides with the plain CR solve ...
        CHECK(pl.tilde_distance <= 1e-10);
        // ... and both comparison constants are exactly one in this regime
        CHECK(pl.c_forward == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(pl.c_backward == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("tilde solution distance is controlled by the oscillation") {
    // f with nonzero oscillation: f = (sin(pi x) sin(pi y), 0) on the square
    SourceField f;
    f.f = [](Vec2 p) { return Vec2{std::sin(M_PI * p.x) * std::sin(M_PI * p.y), 0.0}; };
    f.degree = -1;
    Triangulation t = make_square();
    for (int level = 0; level <= 3; ++level) {
        if (level > 0) t = red_refine(t);
        const SaddleSystem sys = assemble(t, Method::CR, f, nullptr, 10);
        const auto [sol, rep] = solve(sys);
        const PseudostressResult ps = ps_from_cr(t, f, nullptr);
        const int ne = t.num_edges();
        const MeshGeometry g = geometry(t);
        const Eigen::VectorXd diff = sol.velocity - ps.tilde_solution.velocity;
        double acc = 0.0;
        for (int tri = 0; tri < t.num_triangles(); ++tri) {
            const Vec2 gx = cr_gradient(t, tri, diff.head(ne));
            const Vec2 gy = cr_gradient(t, tri, diff.tail(ne));
            acc += g.tri[tri].area * (gx.dot(gx) + gy.dot(gy));
        }
        const double dist = std::sqrt(acc);
        const double osc = oscillation(f, t);
        if (osc > 0) CHECK(dist <= 2.0 * osc);  // empirical constant well below 2
    }
}
