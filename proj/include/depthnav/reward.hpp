#pragma once

namespace depthnav {

// Shaped navigation reward constants. The terminal magnitudes follow the
// training setup this reproduces; the distance-rate gain is a free
// hyper-parameter.
struct RewardConfig {
    double gain_c = 200.0;        // scales the positive approach term
    double r_reached = 500.0;
    double r_collision = -550.0;
    double r_recede = -10.0;
    double d_min = 0.3;           // m
};

// Velocity reduction factor V_r = (1 - max(v, 0.1))^(1/max(d, 0.1)).
// Discourages closing at full speed, increasingly so near the target.
// v is clamped to [0, 1] before use.
double velocity_factor(double v, double d);

struct RewardResult {
    double value = 0.0;
    bool terminal = false;
};

// Branch priority: collision, then reached, then the distance-rate shaping.
//   collision            -> r_collision, terminal
//   d_t < d_min          -> r_reached, terminal
//   d_{t-1} - d_t > 0    -> C * (d_{t-1} - d_t) * V_r
//   otherwise            -> r_recede
RewardResult compute_reward(double d_curr, double d_prev, double v, bool collision,
                            const RewardConfig& cfg);

}  // namespace depthnav
