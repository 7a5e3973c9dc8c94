#include <cmath>

#include "doctest.h"
#include "stokeslab/quadrature.hpp"

using namespace stokeslab;

namespace {

// int over the reference triangle of x^a y^b = a! b! / (a+b+2)!
double reference_monomial_integral(int a, int b) {
    auto fact = [](int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    return fact(a) * fact(b) / fact(a + b + 2);
}

const std::array<Vec2, 3> ref_tri = {Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}};

}  // namespace

TEST_CASE("triangle rules: weights, point locations, exactness") {
    for (int degree = 1; degree <= 12; ++degree) {
        const TriRule& rule = triangle_rule(degree);
        CHECK(rule.exactness >= degree);

        double wsum = 0.0;
        for (const auto& q : rule.points) {
            wsum += q.weight;
            for (double l : q.bary) {
                CHECK(l >= -1e-14);
                CHECK(l <= 1.0 + 1e-14);
            }
            CHECK(q.bary[0] + q.bary[1] + q.bary[2] == doctest::Approx(1.0).epsilon(1e-14));
        }
        CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));

        for (int a = 0; a + 0 <= rule.exactness; ++a) {
            for (int b = 0; a + b <= rule.exactness; ++b) {
                const double val = integrate_triangle<double>(
                    ref_tri, [a, b](Vec2 p) { return std::pow(p.x, a) * std::pow(p.y, b); }, rule);
                const double expected = reference_monomial_integral(a, b);
                CHECK(val == doctest::Approx(expected).epsilon(1e-13));
            }
        }
    }
    CHECK_THROWS(triangle_rule(0));
    CHECK_THROWS(triangle_rule(13));
}

TEST_CASE("degree-1 triangle rule is the centroid rule") {
    const TriRule& rule = triangle_rule(1);
    REQUIRE(rule.points.size() == 1);
    CHECK(rule.points[0].weight == doctest::Approx(0.5));
    CHECK(rule.points[0].bary[0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("spec examples: x^2 at degree 2, x^5 y^5 at degree 10") {
    const double v1 = integrate_triangle<double>(
        ref_tri, [](Vec2 p) { return p.x * p.x; }, triangle_rule(2));
    CHECK(v1 == doctest::Approx(1.0 / 12.0).epsilon(1e-14));

    const double v2 = integrate_triangle<double>(
        ref_tri, [](Vec2 p) { return std::pow(p.x, 5) * std::pow(p.y, 5); }, triangle_rule(10));
    CHECK(v2 == doctest::Approx(reference_monomial_integral(5, 5)).epsilon(1e-13));
}

TEST_CASE("affine mapping contract on a skewed triangle") {
    // T = conv{(1,1),(4,2),(2,5)}, area 11/2; integrate x and x*y analytically:
    // parametrize x = 1+3u+v, y = 1+u+4v over the reference triangle.
    const std::array<Vec2, 3> tri = {Vec2{1, 1}, Vec2{4, 2}, Vec2{2, 5}};
    const TriRule& rule = triangle_rule(4);
    const double ix = integrate_triangle<double>(tri, [](Vec2 p) { return p.x; }, rule);
    CHECK(ix == doctest::Approx(77.0 / 6.0).epsilon(1e-13));  // = area * centroid_x

    const double ixy = integrate_triangle<double>(tri, [](Vec2 p) { return p.x * p.y; }, rule);
    CHECK(ixy == doctest::Approx(275.0 / 8.0).epsilon(1e-13));  // 11 * int_ref of the mapped product
}

TEST_CASE("edge rules: weights and exactness") {
    for (int degree = 1; degree <= 10; ++degree) {
        const EdgeRule& rule = edge_rule(degree);
        CHECK(rule.exactness >= degree);
        double wsum = 0.0;
        for (const auto& q : rule.points) {
            wsum += q.weight;
            CHECK(q.s > 0.0);
            CHECK(q.s < 1.0);
        }
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));

        for (int k = 0; k <= rule.exactness; ++k) {
            double val = 0.0;
            for (const auto& q : rule.points) val += q.weight * std::pow(q.s, k);
            CHECK(val == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
        }
    }
    CHECK_THROWS(edge_rule(0));
    CHECK_THROWS(edge_rule(11));
}

TEST_CASE("edge rule spec examples") {
    const EdgeRule& mid = edge_rule(1);
    REQUIRE(mid.points.size() == 1);
    CHECK(mid.points[0].s == doctest::Approx(0.5));

    double s3 = 0.0;
    for (const auto& q : edge_rule(3).points) s3 += q.weight * std::pow(q.s, 3);
    CHECK(s3 == doctest::Approx(0.25).epsilon(1e-14));

    double s5 = 0.0;
    for (const auto& q : edge_rule(5).points) s5 += q.weight * std::pow(q.s, 5);
    CHECK(s5 == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("vertical-line splitting integrates strip indicators exactly") {
    // rhombus half T1 = conv{(0,1),(0,-1),(1,0)}: int over {0<=x<=eps} of 1
    // equals 2 eps - eps^2; of x equals eps^2 - (2/3) eps^3.
    const std::array<Vec2, 3> tri = {Vec2{0, 1}, Vec2{0, -1}, Vec2{1, 0}};
    const TriRule& rule = triangle_rule(4);
    for (double eps : {0.5, 0.25, 0.1}) {
        const std::vector<double> breaks = {-eps, eps};
        const double a = integrate_triangle_split<double>(
            tri, [eps](Vec2 p) { return p.x <= eps ? 1.0 : 0.0; }, rule, breaks);
        CHECK(a == doctest::Approx(2 * eps - eps * eps).epsilon(1e-13));
        const double b = integrate_triangle_split<double>(
            tri, [eps](Vec2 p) { return p.x <= eps ? p.x : 0.0; }, rule, breaks);
        CHECK(b == doctest::Approx(eps * eps - 2.0 / 3.0 * eps * eps * eps).epsilon(1e-13));
    }
    // sub-triangle areas always add up to the whole
    const auto parts = split_triangle_at_vertical_lines(tri, {0.3});
    double total = 0.0;
    for (const auto& s : parts) total += 0.5 * cross(s[1] - s[0], s[2] - s[0]);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}
