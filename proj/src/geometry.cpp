#include "depthnav/geometry.hpp"

#include <algorithm>
#include <limits>

namespace depthnav {

std::optional<double> ray_box_entry(const Vec2& origin, const Vec2& dir, const Box& box) {
    double t_near = -std::numeric_limits<double>::infinity();
    double t_far = std::numeric_limits<double>::infinity();

    const double o[2] = {origin.x, origin.y};
    const double d[2] = {dir.x, dir.y};
    const double lo[2] = {box.min_x(), box.min_y()};
    const double hi[2] = {box.max_x(), box.max_y()};

    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) {
            if (o[axis] < lo[axis] || o[axis] > hi[axis]) return std::nullopt;
            continue;
        }
        double t1 = (lo[axis] - o[axis]) / d[axis];
        double t2 = (hi[axis] - o[axis]) / d[axis];
        if (t1 > t2) std::swap(t1, t2);
        t_near = std::max(t_near, t1);
        t_far = std::min(t_far, t2);
    }
    if (t_far < t_near || t_far < 0.0) return std::nullopt;
    return std::max(t_near, 0.0);
}

double ray_square_exit(const Vec2& origin, const Vec2& dir, double half_side) {
    double t_exit = std::numeric_limits<double>::infinity();
    const double o[2] = {origin.x, origin.y};
    const double d[2] = {dir.x, dir.y};
    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) continue;
        const double wall = d[axis] > 0.0 ? half_side : -half_side;
        t_exit = std::min(t_exit, (wall - o[axis]) / d[axis]);
    }
    return std::max(t_exit, 0.0);
}

}  // namespace depthnav
