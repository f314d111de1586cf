#include "depthnav/reward.hpp"

#include <algorithm>
#include <cmath>

namespace depthnav {

double velocity_factor(double v, double d) {
    v = std::clamp(v, 0.0, 1.0);
    const double base = 1.0 - std::max(v, 0.1);
    const double exponent = 1.0 / std::max(d, 0.1);
    return std::pow(base, exponent);
}

RewardResult compute_reward(double d_curr, double d_prev, double v, bool collision,
                            const RewardConfig& cfg) {
    if (collision) return {cfg.r_collision, true};
    if (d_curr < cfg.d_min) return {cfg.r_reached, true};

    const double rate = d_prev - d_curr;  // positive while approaching
    if (rate > 0.0) return {cfg.gain_c * rate * velocity_factor(v, d_curr), false};
    return {cfg.r_recede, false};
}

}  // namespace depthnav
