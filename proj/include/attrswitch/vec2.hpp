#pragma once

#include <cmath>

namespace attrswitch {

/// Phase-space vector of the one-degree-of-freedom oscillators.
/// Used both for states (displacement, velocity) and for state derivatives.
struct Vec2 {
    double x = 0.0;
    double v = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, v + o.v}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, v - o.v}; }
    constexpr Vec2 operator*(double s) const { return {x * s, v * s}; }
    constexpr Vec2 operator-() const { return {-x, -v}; }
    constexpr Vec2& operator+=(Vec2 o) {
        x += o.x;
        v += o.v;
        return *this;
    }
};

constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.v}; }

[[nodiscard]] constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.v * b.v; }

/// Squared Euclidean norm.
[[nodiscard]] constexpr double norm2_sq(Vec2 a) { return dot(a, a); }

[[nodiscard]] inline double norm2(Vec2 a) { return std::sqrt(norm2_sq(a)); }

[[nodiscard]] inline bool finite(Vec2 a) { return std::isfinite(a.x) && std::isfinite(a.v); }

using State = Vec2;

/// 2x2 matrix, row major.
struct Mat2 {
    double a00 = 0.0, a01 = 0.0;
    double a10 = 0.0, a11 = 0.0;

    [[nodiscard]] constexpr Vec2 operator*(Vec2 y) const {
        return {a00 * y.x + a01 * y.v, a10 * y.x + a11 * y.v};
    }
    [[nodiscard]] constexpr double trace() const { return a00 + a11; }
    [[nodiscard]] constexpr double det() const { return a00 * a11 - a01 * a10; }
};

}  // namespace attrswitch
