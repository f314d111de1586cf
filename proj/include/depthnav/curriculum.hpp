#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace depthnav {

// Training schedule over the three environments: the incremental ladder, or a
// single-environment baseline.
enum class CurriculumMode { Incremental, NaiveEnv2, NaiveEnv3 };

std::string to_string(CurriculumMode mode);
CurriculumMode curriculum_mode_from_string(const std::string& name);

struct CurriculumThresholds {
    double promote_1_to_2 = 0.90;  // alpha_1
    double promote_2_to_3 = 0.80;  // alpha_2
    double demote_2_to_1 = 0.50;   // beta_1
    double demote_3_to_2 = 0.50;   // beta_2
    int window = 100;              // episodes per verdict
};

struct EpisodeOutcome {
    bool success = false;
    long episode_index = 0;
    double episode_return = 0.0;
    int steps = 0;
};

struct CurriculumTransition {
    long episode_index = 0;
    int from_env = 0;
    int to_env = 0;
    double window_rate = 0.0;
};

// Success-rate-gated environment ladder. A verdict needs a full window; the
// window is cleared on every transition, so consecutive transitions are at
// least one window apart. Promotions require strictly exceeding alpha,
// demotions strictly falling below beta; boundary equality holds position.
class Curriculum {
public:
    explicit Curriculum(CurriculumMode mode, CurriculumThresholds thresholds = {});

    int current_env() const { return current_env_; }
    CurriculumMode mode() const { return mode_; }

    // Pushes one outcome and applies at most one transition.
    std::optional<CurriculumTransition> record_episode(const EpisodeOutcome& outcome);

    // Success fraction over the window; empty while no episode is recorded.
    std::optional<double> success_rate() const;

    int window_count() const { return static_cast<int>(window_.size()); }
    const std::vector<CurriculumTransition>& transitions() const { return transitions_; }

private:
    CurriculumMode mode_;
    CurriculumThresholds thresholds_;
    int current_env_;
    std::deque<bool> window_;
    std::vector<CurriculumTransition> transitions_;
};

}  // namespace depthnav
