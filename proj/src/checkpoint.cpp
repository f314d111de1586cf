#include "depthnav/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

namespace depthnav {

using nlohmann::json;

namespace {

const char* activation_name(nn::Activation act) {
    return act == nn::Activation::LeakyRelu ? "leaky_relu" : "identity";
}

nn::Activation activation_from_name(const std::string& name) {
    if (name == "leaky_relu") return nn::Activation::LeakyRelu;
    if (name == "identity") return nn::Activation::Identity;
    throw std::runtime_error("checkpoint: unknown activation '" + name + "'");
}

json matrix_row_major(const Eigen::MatrixXd& m) {
    json arr = json::array();
    for (long r = 0; r < m.rows(); ++r)
        for (long c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
    return arr;
}

Eigen::MatrixXd matrix_from_row_major(const json& arr, long rows, long cols) {
    if (static_cast<long>(arr.size()) != rows * cols)
        throw std::runtime_error("checkpoint: parameter array size mismatch");
    Eigen::MatrixXd m(rows, cols);
    long k = 0;
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) m(r, c) = arr[static_cast<std::size_t>(k++)].get<double>();
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (long i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Eigen::VectorXd vector_from_json(const json& arr, long size) {
    if (static_cast<long>(arr.size()) != size)
        throw std::runtime_error("checkpoint: bias array size mismatch");
    Eigen::VectorXd v(size);
    for (long i = 0; i < size; ++i) v[i] = arr[static_cast<std::size_t>(i)].get<double>();
    return v;
}

json grads_to_json(const std::vector<nn::ParamGrad>& grads) {
    json arr = json::array();
    for (const nn::ParamGrad& g : grads) {
        arr.push_back({{"weight", matrix_row_major(g.weight)}, {"bias", vector_to_json(g.bias)}});
    }
    return arr;
}

std::vector<nn::ParamGrad> grads_from_json(const json& arr, const nn::Mlp& net) {
    if (arr.size() != net.layers().size())
        throw std::runtime_error("checkpoint: optimizer moment count mismatch");
    std::vector<nn::ParamGrad> grads;
    grads.reserve(arr.size());
    for (std::size_t l = 0; l < arr.size(); ++l) {
        const nn::Layer& layer = net.layers()[l];
        nn::ParamGrad g;
        g.weight = matrix_from_row_major(arr[l].at("weight"), layer.weight.rows(), layer.weight.cols());
        g.bias = vector_from_json(arr[l].at("bias"), layer.bias.size());
        grads.push_back(std::move(g));
    }
    return grads;
}

json sac_config_to_json(const SacConfig& cfg) {
    return json{{"alpha", cfg.alpha},
                {"gamma", cfg.gamma},
                {"tau", cfg.tau},
                {"batch_size", cfg.batch_size},
                {"replay_capacity", cfg.replay_capacity},
                {"warmup_transitions", cfg.warmup_transitions},
                {"hidden_units", cfg.hidden_units},
                {"hidden_layers", cfg.hidden_layers},
                {"lr", cfg.adam.lr},
                {"adam_beta1", cfg.adam.beta1},
                {"adam_beta2", cfg.adam.beta2},
                {"adam_eps", cfg.adam.eps},
                {"v_max", cfg.v_max},
                {"w_max", cfg.w_max},
                {"log_std_min", cfg.log_std_min},
                {"log_std_max", cfg.log_std_max}};
}

SacConfig sac_config_from_json(const json& j) {
    SacConfig cfg;
    cfg.alpha = j.at("alpha").get<double>();
    cfg.gamma = j.at("gamma").get<double>();
    cfg.tau = j.at("tau").get<double>();
    cfg.batch_size = j.at("batch_size").get<int>();
    cfg.replay_capacity = j.at("replay_capacity").get<std::size_t>();
    cfg.warmup_transitions = j.at("warmup_transitions").get<int>();
    cfg.hidden_units = j.at("hidden_units").get<int>();
    cfg.hidden_layers = j.at("hidden_layers").get<int>();
    cfg.adam.lr = j.at("lr").get<double>();
    cfg.adam.beta1 = j.at("adam_beta1").get<double>();
    cfg.adam.beta2 = j.at("adam_beta2").get<double>();
    cfg.adam.eps = j.at("adam_eps").get<double>();
    cfg.v_max = j.at("v_max").get<double>();
    cfg.w_max = j.at("w_max").get<double>();
    cfg.log_std_min = j.at("log_std_min").get<double>();
    cfg.log_std_max = j.at("log_std_max").get<double>();
    return cfg;
}

}  // namespace

json mlp_to_json(const nn::Mlp& net) {
    json layer_shapes = json::array();
    json weights = json::array();
    json biases = json::array();
    json activations = json::array();
    for (const nn::Layer& layer : net.layers()) {
        layer_shapes.push_back({layer.weight.rows(), layer.weight.cols()});
        weights.push_back(matrix_row_major(layer.weight));
        biases.push_back(vector_to_json(layer.bias));
        activations.push_back(activation_name(layer.activation));
    }
    return json{{"layer_shapes", layer_shapes},
                {"weights", weights},
                {"biases", biases},
                {"activations", activations}};
}

nn::Mlp mlp_from_json(const json& j) {
    const json& shapes = j.at("layer_shapes");
    const json& weights = j.at("weights");
    const json& biases = j.at("biases");
    const json& activations = j.at("activations");
    if (shapes.size() != weights.size() || shapes.size() != biases.size() ||
        shapes.size() != activations.size())
        throw std::runtime_error("checkpoint: inconsistent layer arrays");

    nn::Mlp net;
    for (std::size_t l = 0; l < shapes.size(); ++l) {
        const long rows = shapes[l].at(0).get<long>();
        const long cols = shapes[l].at(1).get<long>();
        nn::Layer layer;
        layer.weight = matrix_from_row_major(weights[l], rows, cols);
        layer.bias = vector_from_json(biases[l], rows);
        layer.activation = activation_from_name(activations[l].get<std::string>());
        net.layers().push_back(std::move(layer));
    }
    return net;
}

json adam_to_json(const nn::AdamState& state) {
    return json{{"step_count", state.step_count()},
                {"first_moment", grads_to_json(state.first_moment())},
                {"second_moment", grads_to_json(state.second_moment())}};
}

nn::AdamState adam_from_json(const json& j, const nn::Mlp& net) {
    nn::AdamState state(net);
    state.restore(grads_from_json(j.at("first_moment"), net),
                  grads_from_json(j.at("second_moment"), net), j.at("step_count").get<long>());
    return state;
}

json checkpoint_to_json(const SacAgent& agent, const CheckpointMeta& meta) {
    json j;
    j["format_version"] = meta.format_version;
    j["obs_variant"] = to_string(meta.obs_variant);
    j["env_id"] = meta.env_id;
    j["episode"] = meta.episode;
    j["state_dim"] = agent.state_dim();
    j["sac"] = sac_config_to_json(agent.config());
    j["policy"] = mlp_to_json(agent.policy_net());
    j["q"] = mlp_to_json(agent.q_net());
    j["value"] = mlp_to_json(agent.value_net());
    j["value_target"] = mlp_to_json(agent.value_target_net());
    j["policy_adam"] = adam_to_json(agent.policy_opt());
    j["q_adam"] = adam_to_json(agent.q_opt());
    j["value_adam"] = adam_to_json(agent.value_opt());
    return j;
}

LoadedCheckpoint checkpoint_from_json(const json& j) {
    const int version = j.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion)
        throw std::runtime_error("checkpoint format_version " + std::to_string(version) +
                                 " does not match expected " +
                                 std::to_string(kCheckpointFormatVersion));

    CheckpointMeta meta;
    meta.format_version = version;
    meta.obs_variant = obs_variant_from_string(j.at("obs_variant").get<std::string>());
    meta.env_id = j.at("env_id").get<int>();
    meta.episode = j.at("episode").get<long>();

    const int state_dim = j.at("state_dim").get<int>();
    const SacConfig cfg = sac_config_from_json(j.at("sac"));

    SacAgent agent(state_dim, cfg, 0);
    agent.policy_net() = mlp_from_json(j.at("policy"));
    agent.q_net() = mlp_from_json(j.at("q"));
    agent.value_net() = mlp_from_json(j.at("value"));
    agent.value_target_net() = mlp_from_json(j.at("value_target"));
    agent.policy_opt() = adam_from_json(j.at("policy_adam"), agent.policy_net());
    agent.q_opt() = adam_from_json(j.at("q_adam"), agent.q_net());
    agent.value_opt() = adam_from_json(j.at("value_adam"), agent.value_net());

    if (agent.policy_net().input_dim() != state_dim || agent.q_net().input_dim() != state_dim + 2)
        throw std::runtime_error("checkpoint: network shapes do not match state_dim");

    return LoadedCheckpoint{std::move(agent), meta};
}

void save_checkpoint(const std::string& path, const SacAgent& agent, const CheckpointMeta& meta) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint file '" + path + "'");
    out << checkpoint_to_json(agent, meta).dump(1) << "\n";
    if (!out) throw std::runtime_error("failed while writing checkpoint '" + path + "'");
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("checkpoint '" + path + "' is not valid JSON: " + e.what());
    }
    return checkpoint_from_json(j);
}

}  // namespace depthnav
