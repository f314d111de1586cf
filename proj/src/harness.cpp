#include "depthnav/harness.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace depthnav {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Independent derived-seed streams, all mixed from the run seed.
constexpr std::uint64_t kAgentInitStream = 0xA6E17;
constexpr std::uint64_t kTrainStream = 0x7121A;
constexpr std::uint64_t kEpisodeStream = 0xE8150;
constexpr std::uint64_t kEvalStream = 0xE7A1;

std::string fmt_double(double v, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string g17(double v) { return fmt_double(v, "%.17g"); }
std::string g9(double v) { return fmt_double(v, "%.9g"); }
std::string f4(double v) { return fmt_double(v, "%.4f"); }

void reject_unknown(const json& obj, const std::string& section,
                    std::initializer_list<const char*> known) {
    if (!obj.is_object())
        throw std::runtime_error("config: section '" + section + "' must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok)
            throw std::runtime_error("config: unknown key '" + it.key() + "' in section '" +
                                     section + "'");
    }
}

template <typename T>
void read_field(const json& obj, const std::string& section, const char* key, T& target) {
    if (!obj.contains(key)) return;
    try {
        target = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::runtime_error("config: bad value for '" + section + "." + key + "': " +
                                 e.what());
    }
}

const char* outcome_name(bool reached, bool collision) {
    if (reached) return "reached";
    if (collision) return "collision";
    return "timeout";
}

Eigen::VectorXd assemble(const Simulator& sim, const FrameHistory& history, ObsVariant variant,
                         const LastAction& last_action) {
    return assemble_state(build_obs(history, variant),
                          target_polar(sim.robot().pose, sim.target()), last_action, variant);
}

struct StepRecord {
    int t = 0;
    double v_cmd = 0.0, w_cmd = 0.0;
    RobotState robot;
    double distance = 0.0;
    double reward = 0.0;
    DepthFrame depth;
};

struct EpisodeResult {
    bool reached = false;
    bool collision = false;
    bool timeout = false;
    int steps = 0;
    double episode_return = 0.0;
};

EpisodeResult run_episode(Simulator& sim, std::uint64_t episode_seed, ObsVariant variant,
                          const RewardConfig& reward_cfg, const PolicyFn& policy,
                          std::vector<StepRecord>* trace = nullptr) {
    const Simulator::ResetResult start = sim.reset(episode_seed);
    FrameHistory history;
    history.start(start.depth);
    LastAction last_action{};
    Eigen::VectorXd state = assemble(sim, history, variant, last_action);
    double d_prev = sim.distance_to_target();

    EpisodeResult result;
    for (;;) {
        const ActionSample action = policy(state);
        const StepOutcome out = sim.step(action.v, action.w);
        const RewardResult reward =
            compute_reward(out.distance_to_target, d_prev, out.robot.v, out.collision, reward_cfg);

        result.episode_return += reward.value;
        ++result.steps;
        if (trace)
            trace->push_back({result.steps, action.v, action.w, out.robot,
                              out.distance_to_target, reward.value, out.depth});

        history.push(out.depth);
        last_action = {out.robot.v, out.robot.w};
        state = assemble(sim, history, variant, last_action);
        d_prev = out.distance_to_target;

        if (out.collision || out.reached || out.timeout) {
            result.reached = out.reached;
            result.collision = out.collision;
            result.timeout = out.timeout;
            break;
        }
    }
    return result;
}

void write_trajectory_svg(const std::string& path, const Simulator& sim,
                          const std::vector<Vec2>& positions, const Vec2& target,
                          const Vec2& start, double d_min) {
    const double side = sim.config().arena_side;
    const double half = side / 2.0;
    const double scale = 700.0 / side;
    auto px = [&](double x) { return (x + half) * scale; };
    auto py = [&](double y) { return (half - y) * scale; };

    std::ofstream svg(path);
    if (!svg) throw std::runtime_error("cannot write plot file '" + path + "'");

    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"700\" height=\"700\" "
           "viewBox=\"0 0 700 700\">\n";
    svg << "  <rect class=\"arena\" x=\"0\" y=\"0\" width=\"700\" height=\"700\" "
           "fill=\"#fcfcf7\" stroke=\"#333\" stroke-width=\"3\"/>\n";

    int index = 0;
    for (const Obstacle& o : sim.obstacles()) {
        const bool mobile = o.kind == ObstacleKind::Mobile;
        svg << "  <rect class=\"obstacle " << (mobile ? "obstacle-mobile" : "obstacle-static")
            << "\" id=\"obstacle-" << index++ << "\" x=\"" << g9(px(o.box.min_x())) << "\" y=\""
            << g9(py(o.box.max_y())) << "\" width=\"" << g9(2.0 * o.box.half.x * scale)
            << "\" height=\"" << g9(2.0 * o.box.half.y * scale) << "\" fill=\""
            << (mobile ? "#c9784a" : "#6a7ba2") << "\" fill-opacity=\"0.8\"/>\n";
    }

    svg << "  <circle class=\"target-zone\" cx=\"" << g9(px(target.x)) << "\" cy=\""
        << g9(py(target.y)) << "\" r=\"" << g9(d_min * scale)
        << "\" fill=\"none\" stroke=\"#2c8a43\" stroke-dasharray=\"6 4\"/>\n";
    svg << "  <circle class=\"target\" cx=\"" << g9(px(target.x)) << "\" cy=\""
        << g9(py(target.y)) << "\" r=\"5\" fill=\"#2c8a43\"/>\n";
    svg << "  <circle class=\"start\" cx=\"" << g9(px(start.x)) << "\" cy=\"" << g9(py(start.y))
        << "\" r=\"5\" fill=\"#b33\"/>\n";

    svg << "  <polyline class=\"path\" fill=\"none\" stroke=\"#b33\" stroke-width=\"1.5\" "
           "points=\"";
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (i) svg << ' ';
        svg << g9(px(positions[i].x)) << ',' << g9(py(positions[i].y));
    }
    svg << "\"/>\n</svg>\n";
    if (!svg) throw std::runtime_error("failed while writing plot file '" + path + "'");
}

}  // namespace

TrainConfig train_config_from_json(const json& j) {
    reject_unknown(j, "(top level)", {"train", "sim", "reward", "sac", "curriculum", "eval"});

    TrainConfig cfg;

    if (j.contains("train")) {
        const json& t = j.at("train");
        reject_unknown(t, "train",
                       {"obs_variant", "curriculum_mode", "total_episodes", "max_steps", "seed",
                        "checkpoint_every", "log_every", "out_dir"});
        std::string variant = to_string(cfg.obs_variant);
        std::string mode = to_string(cfg.curriculum_mode);
        read_field(t, "train", "obs_variant", variant);
        read_field(t, "train", "curriculum_mode", mode);
        try {
            cfg.obs_variant = obs_variant_from_string(variant);
            cfg.curriculum_mode = curriculum_mode_from_string(mode);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(std::string("config: ") + e.what());
        }
        read_field(t, "train", "total_episodes", cfg.total_episodes);
        read_field(t, "train", "max_steps", cfg.max_steps);
        read_field(t, "train", "seed", cfg.seed);
        read_field(t, "train", "checkpoint_every", cfg.checkpoint_every);
        read_field(t, "train", "log_every", cfg.log_every);
        read_field(t, "train", "out_dir", cfg.out_dir);
    }

    if (j.contains("sim")) {
        const json& s = j.at("sim");
        reject_unknown(s, "sim",
                       {"arena_side", "dt", "v_max", "w_max", "robot_radius", "d_min", "max_range",
                        "fov_deg", "mobile_speed", "start_x", "start_y"});
        read_field(s, "sim", "arena_side", cfg.sim.arena_side);
        read_field(s, "sim", "dt", cfg.sim.dt);
        read_field(s, "sim", "v_max", cfg.sim.v_max);
        read_field(s, "sim", "w_max", cfg.sim.w_max);
        read_field(s, "sim", "robot_radius", cfg.sim.robot_radius);
        read_field(s, "sim", "d_min", cfg.sim.d_min);
        read_field(s, "sim", "max_range", cfg.sim.max_range);
        read_field(s, "sim", "fov_deg", cfg.sim.fov_deg);
        read_field(s, "sim", "mobile_speed", cfg.sim.mobile_speed);
        read_field(s, "sim", "start_x", cfg.sim.start.x);
        read_field(s, "sim", "start_y", cfg.sim.start.y);
    }

    if (j.contains("reward")) {
        const json& r = j.at("reward");
        reject_unknown(r, "reward", {"gain_c", "r_reached", "r_collision", "r_recede"});
        read_field(r, "reward", "gain_c", cfg.reward.gain_c);
        read_field(r, "reward", "r_reached", cfg.reward.r_reached);
        read_field(r, "reward", "r_collision", cfg.reward.r_collision);
        read_field(r, "reward", "r_recede", cfg.reward.r_recede);
    }

    if (j.contains("sac")) {
        const json& s = j.at("sac");
        reject_unknown(s, "sac",
                       {"alpha", "gamma", "tau", "batch_size", "replay_capacity",
                        "warmup_transitions", "hidden_units", "hidden_layers", "lr", "adam_beta1",
                        "adam_beta2", "adam_eps", "log_std_min", "log_std_max"});
        read_field(s, "sac", "alpha", cfg.sac.alpha);
        read_field(s, "sac", "gamma", cfg.sac.gamma);
        read_field(s, "sac", "tau", cfg.sac.tau);
        read_field(s, "sac", "batch_size", cfg.sac.batch_size);
        read_field(s, "sac", "replay_capacity", cfg.sac.replay_capacity);
        read_field(s, "sac", "warmup_transitions", cfg.sac.warmup_transitions);
        read_field(s, "sac", "hidden_units", cfg.sac.hidden_units);
        read_field(s, "sac", "hidden_layers", cfg.sac.hidden_layers);
        read_field(s, "sac", "lr", cfg.sac.adam.lr);
        read_field(s, "sac", "adam_beta1", cfg.sac.adam.beta1);
        read_field(s, "sac", "adam_beta2", cfg.sac.adam.beta2);
        read_field(s, "sac", "adam_eps", cfg.sac.adam.eps);
        read_field(s, "sac", "log_std_min", cfg.sac.log_std_min);
        read_field(s, "sac", "log_std_max", cfg.sac.log_std_max);
    }

    if (j.contains("curriculum")) {
        const json& c = j.at("curriculum");
        reject_unknown(c, "curriculum", {"alpha1", "alpha2", "beta1", "beta2", "window"});
        read_field(c, "curriculum", "alpha1", cfg.curriculum.promote_1_to_2);
        read_field(c, "curriculum", "alpha2", cfg.curriculum.promote_2_to_3);
        read_field(c, "curriculum", "beta1", cfg.curriculum.demote_2_to_1);
        read_field(c, "curriculum", "beta2", cfg.curriculum.demote_3_to_2);
        read_field(c, "curriculum", "window", cfg.curriculum.window);
    }

    if (j.contains("eval")) {
        const json& e = j.at("eval");
        reject_unknown(e, "eval", {"env_id", "sessions", "episodes_per_session"});
        read_field(e, "eval", "env_id", cfg.eval_env);
        read_field(e, "eval", "sessions", cfg.eval_sessions);
        read_field(e, "eval", "episodes_per_session", cfg.eval_episodes);
    }

    if (cfg.total_episodes <= 0) throw std::runtime_error("config: train.total_episodes must be > 0");
    if (cfg.max_steps <= 0) throw std::runtime_error("config: train.max_steps must be > 0");
    if (cfg.eval_env < 1 || cfg.eval_env > 3)
        throw std::runtime_error("config: eval.env_id must be 1, 2 or 3");

    // Single-source fields shared across modules.
    cfg.sim.max_steps = cfg.max_steps;
    cfg.sac.v_max = cfg.sim.v_max;
    cfg.sac.w_max = cfg.sim.w_max;
    cfg.reward.d_min = cfg.sim.d_min;
    return cfg;
}

TrainConfig load_train_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config '" + path + "' is not valid JSON: " + e.what());
    }
    return train_config_from_json(j);
}

json train_config_to_json(const TrainConfig& cfg) {
    json j;
    j["train"] = {{"obs_variant", to_string(cfg.obs_variant)},
                  {"curriculum_mode", to_string(cfg.curriculum_mode)},
                  {"total_episodes", cfg.total_episodes},
                  {"max_steps", cfg.max_steps},
                  {"seed", cfg.seed},
                  {"checkpoint_every", cfg.checkpoint_every},
                  {"log_every", cfg.log_every},
                  {"out_dir", cfg.out_dir}};
    j["sim"] = {{"arena_side", cfg.sim.arena_side},
                {"dt", cfg.sim.dt},
                {"v_max", cfg.sim.v_max},
                {"w_max", cfg.sim.w_max},
                {"robot_radius", cfg.sim.robot_radius},
                {"d_min", cfg.sim.d_min},
                {"max_range", cfg.sim.max_range},
                {"fov_deg", cfg.sim.fov_deg},
                {"mobile_speed", cfg.sim.mobile_speed},
                {"start_x", cfg.sim.start.x},
                {"start_y", cfg.sim.start.y}};
    j["reward"] = {{"gain_c", cfg.reward.gain_c},
                   {"r_reached", cfg.reward.r_reached},
                   {"r_collision", cfg.reward.r_collision},
                   {"r_recede", cfg.reward.r_recede}};
    j["sac"] = {{"alpha", cfg.sac.alpha},
                {"gamma", cfg.sac.gamma},
                {"tau", cfg.sac.tau},
                {"batch_size", cfg.sac.batch_size},
                {"replay_capacity", cfg.sac.replay_capacity},
                {"warmup_transitions", cfg.sac.warmup_transitions},
                {"hidden_units", cfg.sac.hidden_units},
                {"hidden_layers", cfg.sac.hidden_layers},
                {"lr", cfg.sac.adam.lr},
                {"adam_beta1", cfg.sac.adam.beta1},
                {"adam_beta2", cfg.sac.adam.beta2},
                {"adam_eps", cfg.sac.adam.eps},
                {"log_std_min", cfg.sac.log_std_min},
                {"log_std_max", cfg.sac.log_std_max}};
    j["curriculum"] = {{"alpha1", cfg.curriculum.promote_1_to_2},
                       {"alpha2", cfg.curriculum.promote_2_to_3},
                       {"beta1", cfg.curriculum.demote_2_to_1},
                       {"beta2", cfg.curriculum.demote_3_to_2},
                       {"window", cfg.curriculum.window}};
    j["eval"] = {{"env_id", cfg.eval_env},
                 {"sessions", cfg.eval_sessions},
                 {"episodes_per_session", cfg.eval_episodes}};
    return j;
}

TrainResult train(const TrainConfig& cfg, const TrainCallbacks& callbacks) {
    if (cfg.total_episodes <= 0) throw std::runtime_error("config: train.total_episodes must be > 0");
    if (cfg.max_steps <= 0) throw std::runtime_error("config: train.max_steps must be > 0");

    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + cfg.out_dir +
                                     "': " + ec.message());

    SimConfig sim_cfg = cfg.sim;
    sim_cfg.max_steps = cfg.max_steps;
    RewardConfig reward_cfg = cfg.reward;
    reward_cfg.d_min = sim_cfg.d_min;
    SacConfig sac_cfg = cfg.sac;
    sac_cfg.v_max = sim_cfg.v_max;
    sac_cfg.w_max = sim_cfg.w_max;

    {
        std::ofstream resolved(cfg.out_dir + "/config_resolved.json");
        if (!resolved)
            throw std::runtime_error("output directory '" + cfg.out_dir + "' is not writable");
        resolved << train_config_to_json(cfg).dump(2) << "\n";
    }

    const int sdim = state_dim(cfg.obs_variant);
    SacAgent agent(sdim, sac_cfg, mix_seed(cfg.seed, kAgentInitStream));
    ReplayBuffer buffer(sdim, sac_cfg.replay_capacity);
    RandomStream train_rng(mix_seed(cfg.seed, kTrainStream));
    Curriculum curriculum(cfg.curriculum_mode, cfg.curriculum);

    TrainResult result;
    result.metrics_path = cfg.out_dir + "/metrics.csv";
    result.transitions_path = cfg.out_dir + "/transitions.csv";
    result.checkpoint_path = cfg.out_dir + "/checkpoint_final.json";

    std::ofstream metrics(result.metrics_path);
    if (!metrics) throw std::runtime_error("cannot write '" + result.metrics_path + "'");
    metrics << "episode,env_id,steps,outcome,return,success_rate_100\n";

    std::ofstream transitions(result.transitions_path);
    if (!transitions) throw std::runtime_error("cannot write '" + result.transitions_path + "'");
    transitions << "episode_index,from_env,to_env,window_rate\n";

    for (long ep = 0; ep < cfg.total_episodes; ++ep) {
        const int env_id = curriculum.current_env();
        Simulator sim(make_env_spec(env_id, sim_cfg, cfg.seed), sim_cfg);
        const std::uint64_t episode_seed =
            mix_seed(mix_seed(cfg.seed, kEpisodeStream), static_cast<std::uint64_t>(ep));

        const Simulator::ResetResult start = sim.reset(episode_seed);
        FrameHistory history;
        history.start(start.depth);
        LastAction last_action{};
        Eigen::VectorXd state = assemble(sim, history, cfg.obs_variant, last_action);
        double d_prev = sim.distance_to_target();

        double episode_return = 0.0;
        int steps = 0;
        bool reached = false;
        bool collision = false;

        for (;;) {
            const ActionSample action =
                agent.select_action(state, ActionMode::Stochastic, train_rng);
            const StepOutcome out = sim.step(action.v, action.w);
            const RewardResult reward = compute_reward(out.distance_to_target, d_prev,
                                                       out.robot.v, out.collision, reward_cfg);
            episode_return += reward.value;
            ++steps;

            history.push(out.depth);
            last_action = {out.robot.v, out.robot.w};
            Eigen::VectorXd next_state = assemble(sim, history, cfg.obs_variant, last_action);

            // Timeouts are not physical terminals: done stays false so the
            // bootstrap continues through them.
            const bool done = out.collision || out.reached;
            buffer.push(state, action.raw, reward.value, next_state, done);
            agent.train_step(buffer, train_rng);

            state = std::move(next_state);
            d_prev = out.distance_to_target;

            if (out.collision || out.reached || out.timeout) {
                reached = out.reached;
                collision = out.collision;
                break;
            }
        }

        EpisodeOutcome outcome{reached, ep, episode_return, steps};
        const std::optional<CurriculumTransition> transition = curriculum.record_episode(outcome);
        const double rate = transition ? transition->window_rate : *curriculum.success_rate();

        metrics << ep << ',' << env_id << ',' << steps << ',' << outcome_name(reached, collision)
                << ',' << g9(episode_return) << ',' << f4(rate) << '\n';
        if (transition) {
            transitions << transition->episode_index << ',' << transition->from_env << ','
                        << transition->to_env << ',' << f4(transition->window_rate) << '\n';
            transitions.flush();
            result.transitions.push_back(*transition);
        }

        result.episodes_run = ep + 1;
        if (cfg.log_every > 0 && (ep + 1) % cfg.log_every == 0) {
            std::printf("episode %ld/%d env %d len %d return %.1f rate100 %.2f\n", ep + 1,
                        cfg.total_episodes, env_id, steps, episode_return, rate);
            std::fflush(stdout);
        }
        if (cfg.checkpoint_every > 0 && (ep + 1) % cfg.checkpoint_every == 0) {
            char name[64];
            std::snprintf(name, sizeof name, "/checkpoint_ep%06ld.json", ep + 1);
            save_checkpoint(cfg.out_dir + name, agent,
                            CheckpointMeta{kCheckpointFormatVersion, cfg.obs_variant,
                                           curriculum.current_env(), ep + 1});
        }
        if (callbacks.on_episode && !callbacks.on_episode(outcome, env_id, transition)) break;
    }

    save_checkpoint(result.checkpoint_path, agent,
                    CheckpointMeta{kCheckpointFormatVersion, cfg.obs_variant,
                                   curriculum.current_env(), result.episodes_run});
    result.final_env = curriculum.current_env();
    return result;
}

PolicyFn deterministic_policy(const SacAgent& agent) {
    auto rng = std::make_shared<RandomStream>(0);  // unused in deterministic mode
    return [&agent, rng](const Eigen::VectorXd& state) {
        return agent.select_action(state, ActionMode::Deterministic, *rng);
    };
}

EvalReport evaluate_policy(const PolicyFn& policy, const EvalConfig& cfg) {
    if (cfg.env_id < 1 || cfg.env_id > 3) throw std::invalid_argument("env_id must be 1, 2 or 3");
    if (cfg.sessions <= 0 || cfg.episodes_per_session <= 0)
        throw std::invalid_argument("sessions and episodes_per_session must be positive");

    RewardConfig reward_cfg = cfg.reward;
    reward_cfg.d_min = cfg.sim.d_min;

    EvalReport report;
    for (int session = 0; session < cfg.sessions; ++session) {
        Simulator sim(make_env_spec(cfg.env_id, cfg.sim, cfg.seed), cfg.sim);
        int successes = 0;
        double total_return = 0.0;
        for (int episode = 0; episode < cfg.episodes_per_session; ++episode) {
            const std::uint64_t episode_seed =
                mix_seed(mix_seed(cfg.seed, kEvalStream), static_cast<std::uint64_t>(session),
                         static_cast<std::uint64_t>(episode));
            const EpisodeResult res =
                run_episode(sim, episode_seed, cfg.obs_variant, reward_cfg, policy);
            if (res.reached) ++successes;
            total_return += res.episode_return;
        }
        EvalSession s;
        s.episodes = cfg.episodes_per_session;
        s.success_rate = static_cast<double>(successes) / cfg.episodes_per_session;
        s.mean_reward = total_return / cfg.episodes_per_session;
        report.sessions.push_back(s);
        report.mean_success_rate += s.success_rate;
        report.mean_reward += s.mean_reward;
    }
    report.mean_success_rate /= cfg.sessions;
    report.mean_reward /= cfg.sessions;
    return report;
}

EvalReport evaluate_checkpoint(const std::string& checkpoint_path, const EvalConfig& cfg) {
    const LoadedCheckpoint loaded = load_checkpoint(checkpoint_path);
    EvalConfig effective = cfg;
    effective.obs_variant = loaded.meta.obs_variant;
    return evaluate_policy(deterministic_policy(loaded.agent), effective);
}

json eval_report_to_json(const EvalReport& report) {
    json sessions = json::array();
    for (const EvalSession& s : report.sessions) {
        sessions.push_back({{"success_rate", s.success_rate},
                            {"mean_reward", s.mean_reward},
                            {"episodes", s.episodes}});
    }
    return json{{"sessions", sessions},
                {"mean_success_rate", report.mean_success_rate},
                {"mean_reward", report.mean_reward}};
}

ExportResult export_trajectory(const std::string& checkpoint_path, int env_id,
                               std::uint64_t episode_seed, const std::string& out_dir,
                               const SimConfig& sim_cfg, const RewardConfig& reward,
                               int max_steps) {
    if (env_id < 1 || env_id > 3) throw std::invalid_argument("env_id must be 1, 2 or 3");
    const LoadedCheckpoint loaded = load_checkpoint(checkpoint_path);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + out_dir +
                                     "': " + ec.message());

    SimConfig cfg = sim_cfg;
    cfg.max_steps = max_steps;
    RewardConfig reward_cfg = reward;
    reward_cfg.d_min = cfg.d_min;

    Simulator sim(make_env_spec(env_id, cfg, episode_seed), cfg);
    std::vector<StepRecord> trace;
    run_episode(sim, episode_seed, loaded.meta.obs_variant, reward_cfg,
                deterministic_policy(loaded.agent), &trace);

    // The simulator is left at the episode end; replay it for the geometry of
    // the plot (reset restores the initial obstacle placement).
    Simulator plot_sim(make_env_spec(env_id, cfg, episode_seed), cfg);
    const Simulator::ResetResult start = plot_sim.reset(episode_seed);

    ExportResult result;
    result.steps = static_cast<int>(trace.size());
    result.csv_path = out_dir + "/trajectory.csv";
    result.svg_path = out_dir + "/trajectory.svg";

    std::ofstream csv(result.csv_path);
    if (!csv) throw std::runtime_error("cannot write '" + result.csv_path + "'");
    csv << "t,x,y,theta,v,w,d_t,reward";
    for (int i = 0; i < kDepthSamples; ++i) csv << ",depth_" << i;
    csv << "\n";
    for (const StepRecord& row : trace) {
        csv << row.t << ',' << g17(row.robot.pose.x) << ',' << g17(row.robot.pose.y) << ','
            << g17(row.robot.pose.theta) << ',' << g17(row.v_cmd) << ',' << g17(row.w_cmd) << ','
            << g17(row.distance) << ',' << g17(row.reward);
        for (double d : row.depth.values) csv << ',' << g17(d);
        csv << "\n";
    }
    if (!csv) throw std::runtime_error("failed while writing '" + result.csv_path + "'");

    std::vector<Vec2> positions;
    positions.reserve(trace.size() + 1);
    positions.push_back(start.robot.pose.position());
    for (const StepRecord& row : trace) positions.push_back(row.robot.pose.position());
    write_trajectory_svg(result.svg_path, plot_sim, positions, plot_sim.target(),
                         start.robot.pose.position(), cfg.d_min);
    return result;
}

CompareReport run_comparison(const TrainConfig& base, const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + out_dir +
                                     "': " + ec.message());

    CompareReport report;
    const ObsVariant variants[] = {ObsVariant::O1, ObsVariant::O2, ObsVariant::O3};
    const CurriculumMode modes[] = {CurriculumMode::NaiveEnv2, CurriculumMode::NaiveEnv3,
                                    CurriculumMode::Incremental};

    for (ObsVariant variant : variants) {
        for (CurriculumMode mode : modes) {
            TrainConfig cell = base;
            cell.obs_variant = variant;
            cell.curriculum_mode = mode;
            cell.out_dir = out_dir + "/" + to_string(variant) + "_" + to_string(mode);

            if (cell.log_every > 0)
                std::printf("compare: training %s / %s\n", to_string(variant).c_str(),
                            to_string(mode).c_str());
            const TrainResult trained = train(cell);

            EvalConfig eval_cfg;
            eval_cfg.env_id = base.eval_env;
            eval_cfg.sessions = base.eval_sessions;
            eval_cfg.episodes_per_session = base.eval_episodes;
            eval_cfg.seed = base.seed;
            eval_cfg.sim = base.sim;
            eval_cfg.sim.max_steps = base.max_steps;
            eval_cfg.reward = base.reward;
            const EvalReport eval = evaluate_checkpoint(trained.checkpoint_path, eval_cfg);

            report.rows.push_back({variant, mode, eval.mean_success_rate, eval.mean_reward});
        }
    }

    report.csv_path = out_dir + "/compare_report.csv";
    report.json_path = out_dir + "/compare_report.json";

    std::ofstream csv(report.csv_path);
    if (!csv) throw std::runtime_error("cannot write '" + report.csv_path + "'");
    csv << "obs_variant,training_mode,success_rate_pct,mean_reward\n";
    json rows = json::array();
    for (const CompareRow& row : report.rows) {
        csv << to_string(row.obs_variant) << ',' << to_string(row.mode) << ','
            << f4(100.0 * row.success_rate) << ',' << g9(row.mean_reward) << '\n';
        rows.push_back({{"obs_variant", to_string(row.obs_variant)},
                        {"training_mode", to_string(row.mode)},
                        {"success_rate", row.success_rate},
                        {"mean_reward", row.mean_reward}});
    }

    std::ofstream jout(report.json_path);
    if (!jout) throw std::runtime_error("cannot write '" + report.json_path + "'");
    jout << json{{"eval_env", base.eval_env},
                 {"seed", base.seed},
                 {"rows", rows}}
                .dump(2)
         << "\n";
    return report;
}

}  // namespace depthnav
