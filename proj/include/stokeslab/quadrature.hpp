#pragma once

#include <array>
#include <functional>
#include <vector>

#include "stokeslab/geometry2d.hpp"
#include "stokeslab/mesh.hpp"

namespace stokeslab {

struct TriQuadPoint {
    std::array<double, 3> bary{};
    double weight = 0.0;  // reference-measure weights, summing to 1/2
};

struct TriRule {
    std::vector<TriQuadPoint> points;
    int exactness = 0;
};

struct EdgeQuadPoint {
    double s = 0.0;  // parameter in [0,1]; barycentric pair is (1-s, s)
    double weight = 0.0;  // weights summing to 1
};

struct EdgeRule {
    std::vector<EdgeQuadPoint> points;
    int exactness = 0;
};

/// Symmetric triangle rule exact for total degree <= degree, 1 <= degree <= 12.
/// Throws std::invalid_argument outside the supported range.
const TriRule& triangle_rule(int degree);

/// Gauss rule on [0,1] exact for degree <= degree, 1 <= degree <= 10.
const EdgeRule& edge_rule(int degree);

/// Integral over the physical triangle with coordinates p of a callable
/// f(Vec2) -> T where T is double, Vec2 or Mat2.
template <typename T, typename Fn>
T integrate_triangle(const std::array<Vec2, 3>& p, Fn&& f, const TriRule& rule) {
    const double two_area = cross(p[1] - p[0], p[2] - p[0]);
    T acc{};
    for (const auto& q : rule.points) {
        const Vec2 x = p[0] * q.bary[0] + p[1] * q.bary[1] + p[2] * q.bary[2];
        acc += f(x) * (q.weight * two_area);
    }
    return acc;
}

template <typename T, typename Fn>
T integrate_triangle(const Triangulation& t, int tri, Fn&& f, const TriRule& rule) {
    return integrate_triangle<T>(t.triangle_coords(tri), std::forward<Fn>(f), rule);
}

/// Integral over the segment [a,b] of f(Vec2) -> T.
template <typename T, typename Fn>
T integrate_edge(Vec2 a, Vec2 b, Fn&& f, const EdgeRule& rule) {
    const double len = (b - a).norm();
    T acc{};
    for (const auto& q : rule.points) acc += f(a + (b - a) * q.s) * (q.weight * len);
    return acc;
}

/// Splits the triangle at the vertical lines x = xb for xb in x_breaks and
/// integrates piece by piece; exact for integrands that are smooth within
/// each vertical slab (discontinuous across the break lines).
template <typename T, typename Fn>
T integrate_triangle_split(const std::array<Vec2, 3>& p, Fn&& f, const TriRule& rule,
                           const std::vector<double>& x_breaks);

std::vector<std::array<Vec2, 3>> split_triangle_at_vertical_lines(const std::array<Vec2, 3>& p,
                                                                  const std::vector<double>& x_breaks);

template <typename T, typename Fn>
T integrate_triangle_split(const std::array<Vec2, 3>& p, Fn&& f, const TriRule& rule,
                           const std::vector<double>& x_breaks) {
    if (x_breaks.empty()) return integrate_triangle<T>(p, std::forward<Fn>(f), rule);
    T acc{};
    for (const auto& sub : split_triangle_at_vertical_lines(p, x_breaks)) {
        acc += integrate_triangle<T>(sub, f, rule);
    }
    return acc;
}

}  // namespace stokeslab
