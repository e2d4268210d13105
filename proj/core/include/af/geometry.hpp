#pragma once

#include <array>
#include <cmath>
#include <limits>

namespace af {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    Vec2 normalized() const { double n = norm(); return {x / n, y / n}; }
    // counterclockwise rotation by 90 degrees (unit normal of a unit tangent)
    constexpr Vec2 perp() const { return {-y, x}; }
};

constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
// scalar cross product (z-component of the 3-D cross of the embedded vectors)
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

// slope of a direction against the horizontal axis; +inf for vertical
inline double slope_of(Vec2 v) {
    if (v.x == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(v.y / v.x);
}

// 2x2 matrix [[a, b], [c, d]] acting on column vectors: M*(x,y) = (a*x+b*y, c*x+d*y)
struct Mat2 {
    double a = 0.0, b = 0.0;
    double c = 0.0, d = 0.0;

    constexpr Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    constexpr Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    constexpr Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    constexpr Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    constexpr Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }

    constexpr double det() const { return a * d - b * c; }
    double frobenius() const { return std::sqrt(a * a + b * b + c * c + d * d); }

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

// largest singular value (spectral norm); closed form via the singular values
// of a 2x2 matrix
inline double op_norm(const Mat2& m) {
    const double h = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
    const double dd = m.det();
    double disc = h * h - 4.0 * dd * dd;
    if (disc < 0.0) disc = 0.0;
    return std::sqrt(0.5 * (h + std::sqrt(disc)));
}

// smallest singular value
inline double min_sv(const Mat2& m) {
    const double h = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
    const double dd = m.det();
    double disc = h * h - 4.0 * dd * dd;
    if (disc < 0.0) disc = 0.0;
    return std::sqrt(std::max(0.0, 0.5 * (h - std::sqrt(disc))));
}

// axis-aligned rectangle
struct Box {
    double xlo = 0.0, xhi = 0.0;
    double ylo = 0.0, yhi = 0.0;

    bool contains(Vec2 p) const {
        return p.x >= xlo && p.x <= xhi && p.y >= ylo && p.y <= yhi;
    }
    double width() const { return xhi - xlo; }
    double height() const { return yhi - ylo; }
    double diameter() const { return std::hypot(width(), height()); }
    Vec2 center() const { return {0.5 * (xlo + xhi), 0.5 * (ylo + yhi)}; }
    Box inflated(double fx, double fy) const {
        return {xlo - fx, xhi + fx, ylo - fy, yhi + fy};
    }
};

} // namespace af
