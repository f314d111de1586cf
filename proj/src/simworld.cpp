#include "depthnav/simworld.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace depthnav {

namespace {

constexpr int kMaxSampleAttempts = 10000;

[[noreturn]] void over_constrained(const char* what) {
    throw std::runtime_error(std::string("layout over-constrained: no free space for ") + what +
                             " after 10000 attempts");
}

}  // namespace

EnvSpec make_env_spec(int env_id, const SimConfig& cfg, std::uint64_t seed) {
    EnvSpec spec;
    spec.env_id = env_id;
    spec.arena_side = cfg.arena_side;
    spec.seed = seed;

    const double q = cfg.arena_side / 4.0;  // quarter-point grid spacing
    switch (env_id) {
        case 1:
            break;
        case 2:
            // 3x3 grid minus the center cell.
            for (int ix = -1; ix <= 1; ++ix) {
                for (int iy = -1; iy <= 1; ++iy) {
                    if (ix == 0 && iy == 0) continue;
                    Obstacle o;
                    o.box = Box{{ix * q, iy * q}, {0.25, 0.25}};
                    spec.static_layout.push_back(o);
                }
            }
            break;
        case 3: {
            // Two large boxes at the front and the side of the start corner.
            Obstacle front;
            front.box = Box{{cfg.start.x + 1.0, cfg.start.y}, {0.5, 0.25}};
            Obstacle side;
            side.box = Box{{cfg.start.x, cfg.start.y + 1.0}, {0.25, 0.5}};
            spec.static_layout.push_back(front);
            spec.static_layout.push_back(side);
            spec.mobile_count = 4;
            break;
        }
        default:
            throw std::invalid_argument("env_id must be 1, 2 or 3");
    }
    validate_spec(spec);
    return spec;
}

void validate_spec(const EnvSpec& spec) {
    if (spec.env_id < 1 || spec.env_id > 3) throw std::invalid_argument("env_id must be 1, 2 or 3");
    if (spec.arena_side <= 0.0) throw std::invalid_argument("arena_side must be positive");
    const std::size_t statics = spec.static_layout.size();
    if (spec.env_id == 1 && (statics != 0 || spec.mobile_count != 0))
        throw std::invalid_argument("Env1 must be empty");
    if (spec.env_id == 2 && (statics != 8 || spec.mobile_count != 0))
        throw std::invalid_argument("Env2 must hold 8 static obstacles and no mobile ones");
    if (spec.env_id == 3 && (statics != 2 || spec.mobile_count != 4))
        throw std::invalid_argument("Env3 must hold 2 static and 4 mobile obstacles");

    const double half = spec.arena_side / 2.0;
    for (const Obstacle& o : spec.static_layout) {
        if (o.box.half.x <= 0.0 || o.box.half.y <= 0.0)
            throw std::invalid_argument("obstacle half extents must be positive");
        if (o.box.min_x() < -half || o.box.max_x() > half || o.box.min_y() < -half ||
            o.box.max_y() > half)
            throw std::invalid_argument("obstacle extends outside the arena");
    }
}

DepthFrame raycast_depth(const Pose& pose, const std::vector<Obstacle>& obstacles,
                         double arena_side, double max_range, double fov_deg,
                         long timestamp_step) {
    DepthFrame frame;
    frame.timestamp_step = timestamp_step;
    const double fov = fov_deg * std::numbers::pi / 180.0;
    const Vec2 origin = pose.position();
    const double half = arena_side / 2.0;

    for (int i = 0; i < kDepthSamples; ++i) {
        const double bearing =
            pose.theta - fov / 2.0 + fov * static_cast<double>(i) / (kDepthSamples - 1);
        const Vec2 dir{std::cos(bearing), std::sin(bearing)};
        double hit = ray_square_exit(origin, dir, half);
        for (const Obstacle& o : obstacles) {
            if (auto t = ray_box_entry(origin, dir, o.box)) hit = std::min(hit, *t);
        }
        frame.values[i] = std::min(hit, max_range) / max_range;
    }
    return frame;
}

bool robot_collides(const Vec2& center, double radius,
                    const std::vector<Obstacle>& obstacles, double arena_side) {
    const double half = arena_side / 2.0;
    if (std::abs(center.x) > half - radius || std::abs(center.y) > half - radius) return true;
    for (const Obstacle& o : obstacles) {
        if (dist_point_box(center, o.box) < radius) return true;
    }
    return false;
}

Simulator::Simulator(EnvSpec spec, SimConfig cfg) : spec_(std::move(spec)), cfg_(cfg) {
    validate_spec(spec_);
    robot_.radius = cfg_.robot_radius;
}

Vec2 Simulator::sample_mobile_center(const Box& shape, RandomStream& rng) const {
    const double half = cfg_.arena_side / 2.0;
    // Keep mobile boxes clear of the start disc so episodes never begin in
    // contact, and fully inside the arena.
    const double start_clearance = cfg_.robot_radius + cfg_.d_min;
    for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
        Vec2 c{rng.uniform(-half + shape.half.x, half - shape.half.x),
               rng.uniform(-half + shape.half.y, half - shape.half.y)};
        Box candidate{c, shape.half};
        bool ok = dist_point_box(cfg_.start, candidate) >= start_clearance;
        for (std::size_t i = 0; ok && i < obstacles_.size(); ++i) {
            ok = !boxes_overlap(candidate, obstacles_[i].box);
        }
        if (ok) return c;
    }
    over_constrained("a mobile obstacle");
}

Vec2 Simulator::sample_waypoint(const Vec2& half_extents, RandomStream& rng) const {
    const double half = cfg_.arena_side / 2.0;
    return {rng.uniform(-half + half_extents.x, half - half_extents.x),
            rng.uniform(-half + half_extents.y, half - half_extents.y)};
}

Vec2 Simulator::sample_target(RandomStream& rng) const {
    const double half = cfg_.arena_side / 2.0;
    const double clearance = cfg_.d_min + cfg_.robot_radius;
    for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
        Vec2 t{rng.uniform(-half + clearance, half - clearance),
               rng.uniform(-half + clearance, half - clearance)};
        if (distance(t, cfg_.start) < 1.0) continue;
        bool ok = true;
        for (const Obstacle& o : obstacles_) {
            if (dist_point_box(t, o.box) < clearance) {
                ok = false;
                break;
            }
        }
        if (ok) return t;
    }
    over_constrained("the target");
}

Simulator::ResetResult Simulator::reset(std::uint64_t episode_seed) {
    rng_ = RandomStream(mix_seed(spec_.seed, episode_seed));
    step_count_ = 0;

    robot_.pose = Pose{cfg_.start.x, cfg_.start.y, 0.0};
    robot_.pose.theta = wrap_angle(rng_.uniform(-std::numbers::pi, std::numbers::pi));
    robot_.v = 0.0;
    robot_.w = 0.0;
    robot_.radius = cfg_.robot_radius;

    obstacles_ = spec_.static_layout;
    const Box mobile_shape{{0.0, 0.0}, {0.25, 0.25}};
    for (int i = 0; i < spec_.mobile_count; ++i) {
        Obstacle o;
        o.kind = ObstacleKind::Mobile;
        o.speed = cfg_.mobile_speed;
        o.box = Box{sample_mobile_center(mobile_shape, rng_), mobile_shape.half};
        o.waypoint = sample_waypoint(o.box.half, rng_);
        obstacles_.push_back(o);
    }

    target_ = sample_target(rng_);

    ResetResult result;
    result.robot = robot_;
    result.target = target_;
    result.depth = raycast_depth(robot_.pose, obstacles_, cfg_.arena_side, cfg_.max_range,
                                 cfg_.fov_deg, 0);
    return result;
}

StepOutcome Simulator::step(double v_cmd, double w_cmd) {
    const double dt = cfg_.dt;
    StepOutcome out;

    const double v = std::clamp(v_cmd, 0.0, cfg_.v_max);
    const double w = std::clamp(w_cmd, -cfg_.w_max, cfg_.w_max);
    out.action_clamped = (v != v_cmd) || (w != w_cmd);

    robot_.pose.x += v * std::cos(robot_.pose.theta) * dt;
    robot_.pose.y += v * std::sin(robot_.pose.theta) * dt;
    robot_.pose.theta = wrap_angle(robot_.pose.theta + w * dt);
    robot_.v = v;
    robot_.w = w;

    for (Obstacle& o : obstacles_) {
        if (o.kind != ObstacleKind::Mobile) continue;
        Vec2 to_wp = o.waypoint - o.box.center;
        const double dist = to_wp.norm();
        const double travel = o.speed * dt;
        if (dist <= travel) {
            o.box.center = o.waypoint;
            o.waypoint = sample_waypoint(o.box.half, rng_);
        } else {
            o.box.center = o.box.center + to_wp * (travel / dist);
        }
    }

    ++step_count_;

    const double d_t = distance_to_target();
    out.collision =
        robot_collides(robot_.pose.position(), robot_.radius, obstacles_, cfg_.arena_side);
    out.reached = !out.collision && d_t < cfg_.d_min;
    out.timeout = !out.collision && !out.reached && step_count_ >= cfg_.max_steps;
    out.distance_to_target = d_t;
    out.robot = robot_;
    out.depth = raycast_depth(robot_.pose, obstacles_, cfg_.arena_side, cfg_.max_range,
                              cfg_.fov_deg, step_count_);
    return out;
}

}  // namespace depthnav
