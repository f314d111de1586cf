#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "depthnav/geometry.hpp"
#include "depthnav/rng.hpp"

namespace depthnav {

inline constexpr int kDepthSamples = 10;

// One horizontal scan of normalized depth readings, newest sensor output.
struct DepthFrame {
    std::array<double, kDepthSamples> values{};
    long timestamp_step = 0;
};

// Fixed physical parameters of the simulated world and robot.
struct SimConfig {
    double arena_side = 7.0;      // square room, walls are colliders
    double dt = 0.1;              // s, matches the 10 fps depth stream
    double v_max = 1.0;           // m/s
    double w_max = 1.0;           // rad/s
    double robot_radius = 0.2;    // m
    double d_min = 0.3;           // m, target reached below this distance
    double max_range = 5.0;       // m, depth clamp
    double fov_deg = 58.0;        // horizontal field of view of the depth scan
    double mobile_speed = 0.2;    // m/s, random-waypoint obstacles
    Vec2 start{-2.5, -2.5};       // fixed start position, orientation randomized
    int max_steps = 500;          // episode step budget (timeout, non-terminal)
};

enum class ObstacleKind { Static, Mobile };

struct Obstacle {
    ObstacleKind kind = ObstacleKind::Static;
    Box box;               // axis-aligned, fully inside the arena
    double speed = 0.0;    // m/s, 0 for static
    Vec2 waypoint{};       // mobile only: current motion goal of the box center
};

struct EnvSpec {
    int env_id = 1;        // 1 empty, 2 static grid, 3 static + mobile
    double arena_side = 7.0;
    std::vector<Obstacle> static_layout;
    int mobile_count = 0;
    std::uint64_t seed = 0;
};

// Builds the canonical layout for one curriculum environment.
//   Env1: empty room.
//   Env2: eight 0.5x0.5 boxes on the 3x3 quarter-point grid, center left open.
//   Env3: two 1.0x0.5 boxes near the start plus four mobile 0.5x0.5 boxes.
EnvSpec make_env_spec(int env_id, const SimConfig& cfg, std::uint64_t seed);

// Throws std::invalid_argument when the layout violates the env_id contract.
void validate_spec(const EnvSpec& spec);

struct RobotState {
    Pose pose;
    double v = 0.0;        // m/s in [0, v_max]
    double w = 0.0;        // rad/s in [-w_max, w_max]
    double radius = 0.2;
};

struct StepOutcome {
    RobotState robot;
    DepthFrame depth;
    double distance_to_target = 0.0;
    bool collision = false;
    bool reached = false;
    bool timeout = false;
    bool action_clamped = false;
};

// Casts kDepthSamples rays evenly spaced across the field of view centered on
// the heading; readings are min hit distance clamped to max_range and
// normalized to [0, 1].
DepthFrame raycast_depth(const Pose& pose, const std::vector<Obstacle>& obstacles,
                         double arena_side, double max_range, double fov_deg,
                         long timestamp_step = 0);

bool robot_collides(const Vec2& center, double radius,
                    const std::vector<Obstacle>& obstacles, double arena_side);

// Deterministic kinematic simulation of one episode. Instances are plain
// values; one instance is driven by one thread at a time.
class Simulator {
public:
    Simulator(EnvSpec spec, SimConfig cfg);

    struct ResetResult {
        RobotState robot;
        Vec2 target;
        DepthFrame depth;
    };

    // Places the robot at the fixed start with a random orientation, scatters
    // mobile obstacles, and samples a reachable target. Identical seeds
    // reproduce identical episodes. Throws std::runtime_error if free-space
    // sampling exceeds 10,000 attempts (over-constrained layout).
    ResetResult reset(std::uint64_t episode_seed);

    // Advances the robot (unicycle model) and the mobile obstacles by dt.
    // Commands outside the actuator bounds are clamped and flagged.
    StepOutcome step(double v_cmd, double w_cmd);

    const EnvSpec& spec() const { return spec_; }
    const SimConfig& config() const { return cfg_; }
    const RobotState& robot() const { return robot_; }
    const std::vector<Obstacle>& obstacles() const { return obstacles_; }
    Vec2 target() const { return target_; }
    double distance_to_target() const { return distance(robot_.pose.position(), target_); }
    long steps_taken() const { return step_count_; }

private:
    Vec2 sample_mobile_center(const Box& shape, RandomStream& rng) const;
    Vec2 sample_waypoint(const Vec2& half_extents, RandomStream& rng) const;
    Vec2 sample_target(RandomStream& rng) const;

    EnvSpec spec_;
    SimConfig cfg_;
    std::vector<Obstacle> obstacles_;  // statics first, then mobiles
    RobotState robot_;
    Vec2 target_;
    RandomStream rng_{0};
    long step_count_ = 0;
};

}  // namespace depthnav
