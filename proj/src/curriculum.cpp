#include "depthnav/curriculum.hpp"

#include <stdexcept>

namespace depthnav {

std::string to_string(CurriculumMode mode) {
    switch (mode) {
        case CurriculumMode::Incremental: return "incremental";
        case CurriculumMode::NaiveEnv2: return "naive_env2";
        case CurriculumMode::NaiveEnv3: return "naive_env3";
    }
    throw std::logic_error("unreachable");
}

CurriculumMode curriculum_mode_from_string(const std::string& name) {
    if (name == "incremental") return CurriculumMode::Incremental;
    if (name == "naive_env2") return CurriculumMode::NaiveEnv2;
    if (name == "naive_env3") return CurriculumMode::NaiveEnv3;
    throw std::invalid_argument("unknown curriculum mode '" + name +
                                "' (expected incremental, naive_env2 or naive_env3)");
}

Curriculum::Curriculum(CurriculumMode mode, CurriculumThresholds thresholds)
    : mode_(mode), thresholds_(thresholds) {
    if (thresholds.window <= 0) throw std::invalid_argument("window must be positive");
    auto in_unit = [](double x) { return x > 0.0 && x < 1.0; };
    if (!in_unit(thresholds.promote_1_to_2) || !in_unit(thresholds.promote_2_to_3) ||
        !in_unit(thresholds.demote_2_to_1) || !in_unit(thresholds.demote_3_to_2))
        throw std::invalid_argument("curriculum thresholds must lie in (0,1)");
    if (thresholds.promote_1_to_2 <= thresholds.demote_2_to_1 ||
        thresholds.promote_2_to_3 <= thresholds.demote_3_to_2)
        throw std::invalid_argument("promotion thresholds must exceed demotion thresholds");

    switch (mode) {
        case CurriculumMode::Incremental: current_env_ = 1; break;
        case CurriculumMode::NaiveEnv2: current_env_ = 2; break;
        case CurriculumMode::NaiveEnv3: current_env_ = 3; break;
    }
}

std::optional<double> Curriculum::success_rate() const {
    if (window_.empty()) return std::nullopt;
    long successes = 0;
    for (bool s : window_)
        if (s) ++successes;
    return static_cast<double>(successes) / static_cast<double>(window_.size());
}

std::optional<CurriculumTransition> Curriculum::record_episode(const EpisodeOutcome& outcome) {
    window_.push_back(outcome.success);
    if (window_.size() > static_cast<std::size_t>(thresholds_.window)) window_.pop_front();

    if (mode_ != CurriculumMode::Incremental) return std::nullopt;
    if (window_.size() < static_cast<std::size_t>(thresholds_.window)) return std::nullopt;

    const double rate = *success_rate();
    int next_env = current_env_;
    switch (current_env_) {
        case 1:
            if (rate > thresholds_.promote_1_to_2) next_env = 2;
            break;
        case 2:
            if (rate > thresholds_.promote_2_to_3) next_env = 3;
            else if (rate < thresholds_.demote_2_to_1) next_env = 1;
            break;
        case 3:
            if (rate < thresholds_.demote_3_to_2) next_env = 2;
            break;
    }
    if (next_env == current_env_) return std::nullopt;

    CurriculumTransition transition{outcome.episode_index, current_env_, next_env, rate};
    transitions_.push_back(transition);
    current_env_ = next_env;
    window_.clear();
    return transition;
}

}  // namespace depthnav
