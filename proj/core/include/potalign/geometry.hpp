#pragma once

#include <cmath>

namespace potalign {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double squared_norm() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }
inline double squared_distance(const Vec2& a, const Vec2& b) { return (a - b).squared_norm(); }

// Rotation by angle (radians) in the grid frame (x right, y down).
inline Vec2 rotate(const Vec2& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Axis-aligned box over a point set; diagonal() is the usual object-scale proxy.
struct BBox {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    bool empty = true;

    void expand(const Vec2& p) {
        if (empty) {
            min_x = max_x = p.x;
            min_y = max_y = p.y;
            empty = false;
        } else {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
    }
    double width() const { return empty ? 0.0 : max_x - min_x; }
    double height() const { return empty ? 0.0 : max_y - min_y; }
    double diagonal() const { return std::hypot(width(), height()); }
    Vec2 center() const { return {(min_x + max_x) / 2.0, (min_y + max_y) / 2.0}; }
};

}  // namespace potalign
