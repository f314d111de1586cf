#include "depthnav/observation.hpp"

#include <stdexcept>

namespace depthnav {

int obs_dim(ObsVariant variant) {
    return variant == ObsVariant::O1 ? kDepthSamples : 3 * kDepthSamples;
}

std::string to_string(ObsVariant variant) {
    switch (variant) {
        case ObsVariant::O1: return "O1";
        case ObsVariant::O2: return "O2";
        case ObsVariant::O3: return "O3";
    }
    throw std::logic_error("unreachable");
}

ObsVariant obs_variant_from_string(const std::string& name) {
    if (name == "O1") return ObsVariant::O1;
    if (name == "O2") return ObsVariant::O2;
    if (name == "O3") return ObsVariant::O3;
    throw std::invalid_argument("unknown observation variant '" + name + "' (expected O1, O2 or O3)");
}

Eigen::VectorXd build_obs(const FrameHistory& history, ObsVariant variant) {
    if (!history.started()) throw std::logic_error("frame history not started");

    const auto& f0 = history.frame(0).values;
    const auto& f1 = history.frame(1).values;
    const auto& f2 = history.frame(2).values;

    Eigen::VectorXd obs(obs_dim(variant));
    for (int i = 0; i < kDepthSamples; ++i) {
        switch (variant) {
            case ObsVariant::O1:
                obs[i] = f0[i];
                break;
            case ObsVariant::O2:
                obs[i] = f0[i];
                obs[kDepthSamples + i] = f1[i];
                obs[2 * kDepthSamples + i] = f2[i];
                break;
            case ObsVariant::O3:
                obs[i] = f0[i];
                obs[kDepthSamples + i] = f1[i];
                obs[2 * kDepthSamples + i] = f0[i] - f1[i];
                break;
        }
    }
    return obs;
}

PolarTarget target_polar(const Pose& robot, const Vec2& target) {
    const double dx = target.x - robot.x;
    const double dy = target.y - robot.y;
    PolarTarget polar;
    polar.distance = std::hypot(dx, dy);
    polar.bearing = wrap_angle(std::atan2(dy, dx) - robot.theta);
    return polar;
}

Eigen::VectorXd assemble_state(const Eigen::VectorXd& obs, const PolarTarget& target,
                               const LastAction& last_action, ObsVariant variant) {
    if (obs.size() != obs_dim(variant))
        throw std::logic_error("observation size does not match the variant");

    Eigen::VectorXd state(obs.size() + 4);
    state.head(obs.size()) = obs;
    state[obs.size()] = target.distance;
    state[obs.size() + 1] = target.bearing;
    state[obs.size() + 2] = last_action.v;
    state[obs.size() + 3] = last_action.w;
    return state;
}

}  // namespace depthnav
