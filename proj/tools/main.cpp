// Command-line front end: training, evaluation, trajectory export and the
// incremental-vs-naive comparison grid.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "depthnav/harness.hpp"

namespace {

depthnav::TrainConfig config_or_defaults(const std::string& path) {
    if (path.empty()) return depthnav::TrainConfig{};
    return depthnav::load_train_config(path);
}

void print_eval_report(const depthnav::EvalReport& report) {
    for (std::size_t i = 0; i < report.sessions.size(); ++i) {
        const auto& s = report.sessions[i];
        std::printf("session %zu: success_rate %.1f%%  mean_reward %.3f  (%d episodes)\n", i + 1,
                    100.0 * s.success_rate, s.mean_reward, s.episodes);
    }
    std::printf("aggregate: success_rate %.1f%%  mean_reward %.3f\n",
                100.0 * report.mean_success_rate, report.mean_reward);
    std::cout << depthnav::eval_report_to_json(report).dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Depth-based mapless navigation: SAC training with incremental "
                 "environment complexity"};
    app.require_subcommand(1);

    // train
    std::string train_config_path;
    std::optional<std::uint64_t> train_seed;
    std::string train_out;
    CLI::App* train_cmd = app.add_subcommand("train", "Run the training loop from a config file");
    train_cmd->add_option("--config", train_config_path, "JSON config file")->required();
    train_cmd->add_option("--seed", train_seed, "Override train.seed");
    train_cmd->add_option("--out", train_out, "Override train.out_dir");

    // eval
    std::string eval_checkpoint, eval_config_path;
    int eval_env = 3, eval_sessions = 5, eval_episodes = 100;
    std::uint64_t eval_seed = 1;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint (deterministic policy)");
    eval_cmd->add_option("--checkpoint", eval_checkpoint, "Checkpoint JSON")->required();
    eval_cmd->add_option("--env", eval_env, "Environment id")->check(CLI::Range(1, 3))->required();
    eval_cmd->add_option("--sessions", eval_sessions, "Evaluation sessions");
    eval_cmd->add_option("--episodes", eval_episodes, "Episodes per session");
    eval_cmd->add_option("--seed", eval_seed, "Evaluation seed");
    eval_cmd->add_option("--config", eval_config_path, "Optional config for sim/reward parameters");

    // export
    std::string export_checkpoint, export_config_path, export_out = "export";
    int export_env = 3;
    std::uint64_t export_seed = 1;
    CLI::App* export_cmd =
        app.add_subcommand("export", "Export one episode as trajectory CSV + SVG plot");
    export_cmd->add_option("--checkpoint", export_checkpoint, "Checkpoint JSON")->required();
    export_cmd->add_option("--env", export_env, "Environment id")
        ->check(CLI::Range(1, 3))
        ->required();
    export_cmd->add_option("--seed", export_seed, "Episode seed")->required();
    export_cmd->add_option("--out", export_out, "Output directory");
    export_cmd->add_option("--config", export_config_path, "Optional config for sim/reward parameters");

    // compare
    std::string compare_config_path, compare_out = "compare";
    std::optional<std::uint64_t> compare_seed;
    CLI::App* compare_cmd = app.add_subcommand(
        "compare", "Train and evaluate the 3 observation variants x 3 curriculum modes grid");
    compare_cmd->add_option("--config", compare_config_path, "JSON config file")->required();
    compare_cmd->add_option("--out", compare_out, "Output directory");
    compare_cmd->add_option("--seed", compare_seed, "Override train.seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train_cmd) {
            depthnav::TrainConfig cfg = depthnav::load_train_config(train_config_path);
            if (train_seed) cfg.seed = *train_seed;
            if (!train_out.empty()) cfg.out_dir = train_out;
            const depthnav::TrainResult result = depthnav::train(cfg);
            std::printf("trained %ld episodes, final env %d, %zu curriculum transitions\n",
                        result.episodes_run, result.final_env, result.transitions.size());
            std::printf("checkpoint: %s\nmetrics: %s\ntransitions: %s\n",
                        result.checkpoint_path.c_str(), result.metrics_path.c_str(),
                        result.transitions_path.c_str());
        } else if (*eval_cmd) {
            const depthnav::TrainConfig base = config_or_defaults(eval_config_path);
            depthnav::EvalConfig cfg;
            cfg.env_id = eval_env;
            cfg.sessions = eval_sessions;
            cfg.episodes_per_session = eval_episodes;
            cfg.seed = eval_seed;
            cfg.sim = base.sim;
            cfg.reward = base.reward;
            print_eval_report(depthnav::evaluate_checkpoint(eval_checkpoint, cfg));
        } else if (*export_cmd) {
            const depthnav::TrainConfig base = config_or_defaults(export_config_path);
            const depthnav::ExportResult result = depthnav::export_trajectory(
                export_checkpoint, export_env, export_seed, export_out, base.sim, base.reward,
                base.max_steps);
            std::printf("exported %d steps\ncsv: %s\nplot: %s\n", result.steps,
                        result.csv_path.c_str(), result.svg_path.c_str());
        } else if (*compare_cmd) {
            depthnav::TrainConfig cfg = depthnav::load_train_config(compare_config_path);
            if (compare_seed) cfg.seed = *compare_seed;
            const depthnav::CompareReport report = depthnav::run_comparison(cfg, compare_out);
            std::printf("%-12s %-12s %14s %12s\n", "obs_variant", "mode", "success_rate", "mean_reward");
            for (const auto& row : report.rows) {
                std::printf("%-12s %-12s %13.1f%% %12.3f\n", to_string(row.obs_variant).c_str(),
                            to_string(row.mode).c_str(), 100.0 * row.success_rate,
                            row.mean_reward);
            }
            std::printf("report: %s\n", report.csv_path.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
