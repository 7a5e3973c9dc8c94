#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "stokeslab/analysis.hpp"
#include "stokeslab/experiments.hpp"
#include "stokeslab/solver.hpp"

using namespace stokeslab;

namespace {

Triangulation reference_triangle_mesh() {
    Triangulation t;
    t.vertices = {{0, 0}, {1, 0}, {0, 1}};
    t.triangles = {{{0, 1, 2}}};
    t.finalize();
    return t;
}

}  // namespace

TEST_CASE("CR element stiffness has rank 2 per component") {
    const Triangulation t = reference_triangle_mesh();
    const LocalMatrices lm =
        local_matrices(t, geometry(t), Method::CR, 0, zero_source(), 2);
    // x-component block is 3x3 with the constant in its kernel
    const Eigen::MatrixXd blk = lm.stiffness.topLeftCorner(3, 3);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(blk);
    lu.setThreshold(1e-10);
    CHECK(lu.rank() == 2);
    const Eigen::Vector3d ones = Eigen::Vector3d::Ones();
    CHECK((blk * ones).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("P0 divergence coupling equals the boundary flux oracle") {
    // int_T div v dx = boundary integral of v . nu, computed with edge quadrature
    const Triangulation t = red_refine(make_lshape());
    const MeshGeometry geom = geometry(t);
    const EdgeRule& erule = edge_rule(5);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);

    for (Method m : all_methods) {
        const int tri = 3;
        const int qd = assembly_quadrature_degree(m, zero_source());
        const LocalMatrices lm = local_matrices(t, geom, m, tri, zero_source(), qd);
        const LocalBasis probe = eval_basis(t, geom, m, tri, {1.0 / 3, 1.0 / 3, 1.0 / 3});

        Eigen::VectorXd coeff(probe.n_vel);
        for (int i = 0; i < probe.n_vel; ++i) coeff(i) = dist(rng);

        // oracle: sum over the three edges of int_E v . nu ds with outward nu
        double flux = 0.0;
        for (int k = 0; k < 3; ++k) {
            const int e = t.tri_edges[tri][k];
            const Vec2 a = t.vertices[t.edges[e].a].pos();
            const Vec2 b = t.vertices[t.edges[e].b].pos();
            Vec2 nu = geom.edge[e].normal;
            if (t.edges[e].tri[0] != tri) nu = -nu;  // stored normal points out of tri[0]
            const auto vfield = [&](Vec2 x) {
                const LocalBasis lb = eval_basis(t, geom, m, tri, barycentric_of(t, tri, x));
                Vec2 v;
                for (int i = 0; i < lb.n_vel; ++i) v += lb.value[i] * coeff(i);
                return v.dot(nu);
            };
            flux += integrate_edge<double>(a, b, vfield, erule);
        }

        double div_int = 0.0;  // P0 row = int_T div v (P0 methods); MINI: sum of hats
        for (int qi = 0; qi < lm.div_coupling.rows(); ++qi) {
            div_int += lm.div_coupling.row(qi).dot(coeff);
        }
        CHECK(div_int == doctest::Approx(flux).epsilon(1e-12));
    }
}

TEST_CASE("CR load for f=(1,0) is |T|/3 per edge dof") {
    const Triangulation t = make_rhombus();
    SourceField f;
    f.f = [](Vec2) { return Vec2{1.0, 0.0}; };
    f.degree = 0;
    const LocalMatrices lm = local_matrices(t, geometry(t), Method::CR, 0, f, 2);
    for (int k = 0; k < 3; ++k) {
        CHECK(lm.load(k) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));  // |T| = 1
        CHECK(lm.load(3 + k) == doctest::Approx(0.0));
    }
}

TEST_CASE("homogeneous problems have the zero solution") {
    const Triangulation t = red_refine(make_rhombus());
    for (Method m : all_methods) {
        const SaddleSystem sys = assemble(t, m, zero_source(), nullptr);
        const auto [sol, rep] = solve(sys);
        CHECK(sol.velocity.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
        CHECK(sol.pressure.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
        CHECK(rep.relative_residual <= 1e-10);
    }
}

TEST_CASE("rigid rotation u=(-y,x) is reproduced exactly by all methods") {
    ExactSolution ex;
    ex.domain = Domain::square;
    ex.degree = 1;
    ex.u = [](Vec2 p) { return Vec2{-p.y, p.x}; };
    ex.grad_u = [](Vec2) { return Mat2{0, -1, 1, 0}; };
    ex.p = [](Vec2) { return 0.0; };
    ex.f = zero_source();

    const Triangulation t = red_refine(make_square());
    for (Method m : all_methods) {
        const SolveOutcome oc = solve_and_measure(t, m, ex);
        CHECK(oc.err_energy <= 1e-10);
        CHECK(oc.err_pressure <= 1e-10);
    }
}

TEST_CASE("assembled velocity block is symmetric") {
    const Triangulation t = red_refine(make_lshape());
    for (Method m : all_methods) {
        const SaddleSystem sys = assemble(t, m, zero_source(), nullptr);
        const Eigen::SparseMatrix<double> diff = Eigen::SparseMatrix<double>(sys.A.transpose()) - sys.A;
        double maxref = 0.0;
        for (int k = 0; k < sys.A.outerSize(); ++k) {
            for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, k); it; ++it) {
                maxref = std::max(maxref, std::abs(it.value()));
            }
        }
        double maxdiff = 0.0;
        for (int k = 0; k < diff.outerSize(); ++k) {
            for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it) {
                maxdiff = std::max(maxdiff, std::abs(it.value()));
            }
        }
        CHECK(maxdiff <= 1e-12 * maxref);
    }
}

TEST_CASE("rhombus counterexample: CR with the strip load") {
    // Exact discrete solution derived by hand (and cross-checked symbolically):
    // u_CR = 0 and p_CR = +-(1 - 3/2 eps + 2/3 eps^2).
    for (double eps : {0.5, 0.25, 0.125}) {
        const Triangulation t = make_rhombus();
        const ExactSolution ex = rhombus_eps(eps);
        const SolveOutcome oc = solve_and_measure(t, Method::CR, ex);
        CHECK(oc.solution.velocity.cwiseAbs().maxCoeff() <= 1e-12);
        const double expected = 1.0 - 1.5 * eps + 2.0 / 3.0 * eps * eps;
        const MeshGeometry geom = geometry(t);
        for (int tri = 0; tri < 2; ++tri) {
            const double sign = geom.tri[tri].centroid.x > 0 ? 1.0 : -1.0;
            CHECK(oc.solution.pressure(tri) == doctest::Approx(sign * expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("rhombus counterexample: MINI with f=(1,0) reproduces u=0, p=x") {
    const Triangulation t = make_rhombus();
    const SolveOutcome oc = solve_and_measure(t, Method::MINI, rhombus_px());
    CHECK(oc.solution.velocity.cwiseAbs().maxCoeff() <= 1e-12);
    for (int v = 0; v < t.num_vertices(); ++v) {
        CHECK(oc.solution.pressure(v) == doctest::Approx(t.vertices[v].x).epsilon(1e-12));
    }
    CHECK(oc.err_pressure <= 1e-10);
    CHECK(oc.err_energy <= 1e-10);
}

TEST_CASE("rhombus MINI with the strip load matches the exact discrete solution") {
    // closed-form solve of the 9-unknown MINI system at eps = 1/2 (symbolic
    // oracle): u = 0, p = 13/8 at (1,0), -13/8 at (-1,0), 0 on the x=0 line.
    const Triangulation t = make_rhombus();
    const SolveOutcome oc = solve_and_measure(t, Method::MINI, rhombus_eps(0.5));
    for (int v = 0; v < 4; ++v) {
        const double expected = t.vertices[v].x > 0 ? 13.0 / 8.0 : (t.vertices[v].x < 0 ? -13.0 / 8.0 : 0.0);
        CHECK(oc.solution.pressure(v) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(oc.err_pressure == doctest::Approx(0.190940653956493).epsilon(1e-12));
    CHECK(oc.solution.velocity.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("MINI bubble components satisfy the elementwise closed form") {
    // Testing the momentum equations with a single element bubble decouples
    // its coefficients:
    //   alpha_T = [ int_T b_T (Pi0 f - grad p_h) + int_T (f - Pi0 f) b_T ] / ||grad b_T||^2
    // with b_T = lambda_0 lambda_1 lambda_2. Holds exactly for the discrete
    // solution, which makes it a sharp oracle for the bubble block.
    auto check_bubbles = [](const Triangulation& t, const ExactSolution& ex, double tol) {
        const SolveOutcome oc = solve_and_measure(t, Method::MINI, ex);
        const MeshGeometry geom = geometry(t);
        const TriRule& rule = triangle_rule(6);
        const int nv = t.num_vertices();
        const DofMap& dm = oc.dofmap;
        for (int tri = 0; tri < t.num_triangles(); ++tri) {
            const auto coords = t.triangle_coords(tri);
            const auto g = barycentric_gradients(t, tri);
            const double area = geom.tri[tri].area;

            Vec2 grad_p;
            for (int k = 0; k < 3; ++k) grad_p += g[k] * oc.solution.pressure(t.triangles[tri].v[k]);

            const auto bubble = [&](Vec2 x) {
                const auto l = barycentric_of(t, tri, x);
                return l[0] * l[1] * l[2];
            };
            const double int_b = area / 60.0;
            const double grad_b2 = integrate_triangle<double>(
                coords,
                [&](Vec2 x) {
                    const auto l = barycentric_of(t, tri, x);
                    const Vec2 gb = g[0] * (l[1] * l[2]) + g[1] * (l[0] * l[2]) + g[2] * (l[0] * l[1]);
                    return gb.dot(gb);
                },
                rule);

            Vec2 f0, osc_moment;
            if (!ex.f.is_zero()) {
                f0 = integrate_triangle_split<Vec2>(
                         coords, [&](Vec2 x) { return ex.f.eval(tri, x); }, rule, ex.f.x_breaks) /
                     area;
                osc_moment = integrate_triangle_split<Vec2>(
                    coords, [&](Vec2 x) { return (ex.f.eval(tri, x) - f0) * bubble(x); }, rule,
                    ex.f.x_breaks);
            }
            const Vec2 alpha = ((f0 - grad_p) * int_b + osc_moment) / grad_b2;
            CHECK(oc.solution.velocity(nv + tri) == doctest::Approx(alpha.x).epsilon(tol));
            CHECK(oc.solution.velocity(dm.n_scalar + nv + tri) ==
                  doctest::Approx(alpha.y).epsilon(tol));
        }
    };

    SUBCASE("colliding flow, f = 0") {
        check_bubbles(red_refine(make_square()), colliding_flow(), 1e-9);
    }
    SUBCASE("rhombus strip load with nonzero oscillation") {
        check_bubbles(make_rhombus(), rhombus_eps(0.5), 1e-9);
    }
}

TEST_CASE("solver reports and zero-mean pressure") {
    const Triangulation t = red_refine(red_refine(make_square()));
    const ExactSolution ex = colliding_flow();
    for (Method m : all_methods) {
        const SaddleSystem sys = assemble(t, m, ex.f, ex.dirichlet());
        const auto [sol, rep] = solve(sys);
        CHECK(rep.relative_residual <= 1e-10);
        CHECK(std::abs(sys.c.dot(sol.pressure)) <= 1e-10 * domain_area(Domain::square));
    }
}

TEST_CASE("solution is independent of dof ordering") {
    const Triangulation t = red_refine(make_square());
    const ExactSolution ex = colliding_flow();
    const SaddleSystem sys = assemble(t, Method::CR, ex.f, ex.dirichlet());
    const auto [sol, rep] = solve(sys);

    // permute the interior unknowns and solve again
    const int ni = static_cast<int>(sys.A.rows());
    std::vector<int> perm(ni);
    for (int i = 0; i < ni; ++i) perm[i] = i;
    std::mt19937 rng(123);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::PermutationMatrix<Eigen::Dynamic> P(ni);
    for (int i = 0; i < ni; ++i) P.indices()(i) = perm[i];

    SaddleSystem permuted = sys;
    permuted.A = P * sys.A * P.transpose();
    permuted.B = sys.B * P.transpose();
    permuted.F = P * sys.F;
    const auto [psol, prep] = solve(permuted);

    // undo the permutation on the interior part
    Eigen::VectorXd vel = sys.g_lift;
    Eigen::VectorXd pint(ni), got(ni);
    for (size_t i = 0; i < sys.dofmap.interior.size(); ++i) {
        pint(static_cast<int>(i)) = psol.velocity(sys.dofmap.interior[i]);
    }
    got = P.transpose() * pint;
    for (size_t i = 0; i < sys.dofmap.interior.size(); ++i) {
        vel(sys.dofmap.interior[i]) = got(static_cast<int>(i));
    }
    CHECK((vel - sol.velocity).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((psol.pressure - sol.pressure).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("Galerkin residual vanishes on discrete test space after solve") {
    const Triangulation t = red_refine(make_square());
    const ExactSolution ex = colliding_flow();
    for (Method m : {Method::MINI, Method::P2P0, Method::BR}) {
        const SaddleSystem sys = assemble(t, m, ex.f, ex.dirichlet());
        const auto [sol, rep] = solve(sys);
        Eigen::VectorXd u_int(sys.A.rows());
        for (size_t i = 0; i < sys.dofmap.interior.size(); ++i) {
            u_int(static_cast<int>(i)) = sol.velocity(sys.dofmap.interior[i]);
        }
        const Eigen::VectorXd res = sys.F - sys.A * u_int + sys.B.transpose() * sol.pressure;
        const double fn = sys.F.norm();
        CHECK(res.norm() <= 1e-10 * (fn > 0 ? fn : 1.0));
    }
}
