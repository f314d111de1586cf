#pragma once

#include <Eigen/Core>
#include <array>
#include <string>

#include "depthnav/geometry.hpp"
#include "depthnav/simworld.hpp"

namespace depthnav {

// The three evaluated depth-observation layouts:
//   O1 = [F_t]                      (10 values)
//   O2 = [F_t; F_{t-1}; F_{t-2}]    (30 values)
//   O3 = [F_t; F_{t-1}; F_t - F_{t-1}]  (30 values)
enum class ObsVariant { O1, O2, O3 };

int obs_dim(ObsVariant variant);
inline int state_dim(ObsVariant variant) { return obs_dim(variant) + 4; }

std::string to_string(ObsVariant variant);
ObsVariant obs_variant_from_string(const std::string& name);

// Sliding window over the last three depth frames. At episode start the first
// frame is replicated backward so the stacked variants are defined from t=0.
class FrameHistory {
public:
    void start(const DepthFrame& first) {
        frames_.fill(first);
        started_ = true;
    }

    void push(const DepthFrame& frame) {
        frames_[2] = frames_[1];
        frames_[1] = frames_[0];
        frames_[0] = frame;
    }

    // age 0 = F_t, 1 = F_{t-1}, 2 = F_{t-2}
    const DepthFrame& frame(int age) const { return frames_.at(static_cast<std::size_t>(age)); }
    bool started() const { return started_; }

private:
    std::array<DepthFrame, 3> frames_{};
    bool started_ = false;
};

Eigen::VectorXd build_obs(const FrameHistory& history, ObsVariant variant);

struct PolarTarget {
    double distance = 0.0;
    double bearing = 0.0;  // radians in (-pi, pi], relative to the heading
};

PolarTarget target_polar(const Pose& robot, const Vec2& target);

struct LastAction {
    double v = 0.0;
    double w = 0.0;
};

// Concatenates [obs; distance; bearing; v_prev; w_prev] into the (n+4)-dim
// network input. Throws std::logic_error on a dimension mismatch.
Eigen::VectorXd assemble_state(const Eigen::VectorXd& obs, const PolarTarget& target,
                               const LastAction& last_action, ObsVariant variant);

}  // namespace depthnav
