#pragma once

#include <cmath>

namespace nv2d {

// Plain 2-vector used for positions, momenta and cone directions.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr Vec2& operator-=(Vec2 o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }

    constexpr double operator[](int i) const { return i == 0 ? x : y; }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// v ∧ w = v1 w2 - v2 w1, the scalar 2D cross product.
constexpr double wedge(Vec2 v, Vec2 w) { return v.x * w.y - v.y * w.x; }

inline double norm(Vec2 v) { return std::sqrt(v.x * v.x + v.y * v.y); }

constexpr double norm2(Vec2 v) { return v.x * v.x + v.y * v.y; }

// Rotated by +90 degrees: (-v2, v1).
constexpr Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

inline bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

} // namespace nv2d
