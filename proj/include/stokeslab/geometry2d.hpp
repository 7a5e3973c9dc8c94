#pragma once

#include <array>
#include <cmath>

namespace stokeslab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2 operator-() const { return {-x, -y}; }

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// z-component of the 2D cross product a x b.
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// Counterclockwise rotation by 90 degrees.
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

/// 2x2 matrix with row-major entries; for gradients, row j holds grad of component j.
struct Mat2 {
    double a00 = 0.0, a01 = 0.0;
    double a10 = 0.0, a11 = 0.0;

    Mat2 operator+(const Mat2& o) const { return {a00 + o.a00, a01 + o.a01, a10 + o.a10, a11 + o.a11}; }
    Mat2 operator-(const Mat2& o) const { return {a00 - o.a00, a01 - o.a01, a10 - o.a10, a11 - o.a11}; }
    Mat2 operator*(double s) const { return {a00 * s, a01 * s, a10 * s, a11 * s}; }
    Mat2& operator+=(const Mat2& o) { a00 += o.a00; a01 += o.a01; a10 += o.a10; a11 += o.a11; return *this; }

    double trace() const { return a00 + a11; }
    double frobenius2() const { return a00 * a00 + a01 * a01 + a10 * a10 + a11 * a11; }
    /// Scalar product A:B.
    double ddot(const Mat2& o) const { return a00 * o.a00 + a01 * o.a01 + a10 * o.a10 + a11 * o.a11; }
    Mat2 deviatoric() const {
        const double half_tr = 0.5 * trace();
        return {a00 - half_tr, a01, a10, a11 - half_tr};
    }
};

inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

/// Outer product (a (x) b)_{jk} = a_j b_k.
inline Mat2 outer(Vec2 a, Vec2 b) { return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y}; }

inline Mat2 identity2(double s = 1.0) { return {s, 0.0, 0.0, s}; }

}  // namespace stokeslab
