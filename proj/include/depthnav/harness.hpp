#pragma once

#include <json.hpp>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "depthnav/checkpoint.hpp"
#include "depthnav/curriculum.hpp"
#include "depthnav/observation.hpp"
#include "depthnav/reward.hpp"
#include "depthnav/sac.hpp"
#include "depthnav/simworld.hpp"

namespace depthnav {

// Full experiment description. The JSON config mirrors this struct with one
// flat object per module section; unknown keys are rejected.
struct TrainConfig {
    ObsVariant obs_variant = ObsVariant::O3;
    CurriculumMode curriculum_mode = CurriculumMode::Incremental;
    int total_episodes = 5000;
    int max_steps = 500;
    std::uint64_t seed = 1;
    int checkpoint_every = 500;
    int log_every = 100;  // stdout progress period, 0 = silent
    std::string out_dir = "runs/out";

    SimConfig sim{};
    RewardConfig reward{};
    SacConfig sac{};
    CurriculumThresholds curriculum{};

    int eval_env = 3;
    int eval_sessions = 5;
    int eval_episodes = 100;
};

TrainConfig train_config_from_json(const nlohmann::json& j);
TrainConfig load_train_config(const std::string& path);
nlohmann::json train_config_to_json(const TrainConfig& cfg);

struct TrainCallbacks {
    // Called after every episode; return false to stop the run early.
    std::function<bool(const EpisodeOutcome&, int env_id,
                       const std::optional<CurriculumTransition>&)>
        on_episode;
};

struct TrainResult {
    long episodes_run = 0;
    int final_env = 1;
    std::vector<CurriculumTransition> transitions;
    std::string checkpoint_path;
    std::string metrics_path;
    std::string transitions_path;
};

// Runs the training loop: reset -> act/step/reward/store/train -> episode
// outcome feeds the curriculum. Writes per-episode metrics CSV, the
// transition log CSV, and periodic + final checkpoints under cfg.out_dir.
// Fully reproducible from (config, seed).
TrainResult train(const TrainConfig& cfg, const TrainCallbacks& callbacks = {});

// A policy maps the assembled state vector to an action.
using PolicyFn = std::function<ActionSample(const Eigen::VectorXd&)>;

PolicyFn deterministic_policy(const SacAgent& agent);

struct EvalConfig {
    int env_id = 3;
    int sessions = 5;
    int episodes_per_session = 100;
    std::uint64_t seed = 1;
    ObsVariant obs_variant = ObsVariant::O3;
    SimConfig sim{};
    RewardConfig reward{};
};

struct EvalSession {
    double success_rate = 0.0;
    double mean_reward = 0.0;
    int episodes = 0;
};

struct EvalReport {
    std::vector<EvalSession> sessions;
    double mean_success_rate = 0.0;
    double mean_reward = 0.0;
};

// Evaluation protocol: `sessions` x `episodes_per_session` episodes with seeds
// derived from (seed, session, episode). Never mutates the policy.
EvalReport evaluate_policy(const PolicyFn& policy, const EvalConfig& cfg);
EvalReport evaluate_checkpoint(const std::string& checkpoint_path, const EvalConfig& cfg);

nlohmann::json eval_report_to_json(const EvalReport& report);

struct ExportResult {
    std::string csv_path;
    std::string svg_path;
    int steps = 0;
};

// Replays one deterministic episode and writes a per-step CSV plus an
// overhead SVG plot of arena, obstacles, path and target.
ExportResult export_trajectory(const std::string& checkpoint_path, int env_id,
                               std::uint64_t episode_seed, const std::string& out_dir,
                               const SimConfig& sim, const RewardConfig& reward, int max_steps);

struct CompareRow {
    ObsVariant obs_variant;
    CurriculumMode mode;
    double success_rate = 0.0;
    double mean_reward = 0.0;
};

struct CompareReport {
    std::vector<CompareRow> rows;  // 3 variants x 3 curriculum modes
    std::string csv_path;
    std::string json_path;
};

// The 3 observation variants x {naive_env2, naive_env3, incremental} grid:
// trains each cell with the shared seed from `base`, evaluates every model in
// the same environment (base.eval_env), and archives one report row per cell.
CompareReport run_comparison(const TrainConfig& base, const std::string& out_dir);

}  // namespace depthnav
