#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace depthnav {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a + std::numbers::pi, two_pi);
    if (a <= 0.0) a += two_pi;
    return a - std::numbers::pi;
}

// Planar pose; theta is kept wrapped to (-pi, pi].
struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    Vec2 position() const { return {x, y}; }
    Vec2 heading() const { return {std::cos(theta), std::sin(theta)}; }
};

// Axis-aligned box given by center and half extents.
struct Box {
    Vec2 center;
    Vec2 half;

    double min_x() const { return center.x - half.x; }
    double max_x() const { return center.x + half.x; }
    double min_y() const { return center.y - half.y; }
    double max_y() const { return center.y + half.y; }

    bool contains(const Vec2& p) const {
        return p.x >= min_x() && p.x <= max_x() && p.y >= min_y() && p.y <= max_y();
    }

    Vec2 closest_point(const Vec2& p) const {
        return {std::clamp(p.x, min_x(), max_x()), std::clamp(p.y, min_y(), max_y())};
    }
};

inline double dist_point_box(const Vec2& p, const Box& b) {
    return distance(p, b.closest_point(p));
}

inline bool boxes_overlap(const Box& a, const Box& b) {
    return std::abs(a.center.x - b.center.x) < a.half.x + b.half.x &&
           std::abs(a.center.y - b.center.y) < a.half.y + b.half.y;
}

// Distance along the ray (origin, unit dir) to the first intersection with the
// box, via the slab method. An origin inside the box yields 0. nullopt = miss.
std::optional<double> ray_box_entry(const Vec2& origin, const Vec2& dir, const Box& box);

// Distance along the ray to the boundary of the centered square [-h, h]^2,
// from an origin inside it.
double ray_square_exit(const Vec2& origin, const Vec2& dir, double half_side);

}  // namespace depthnav
