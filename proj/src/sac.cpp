#include "depthnav/sac.hpp"

#include <stdexcept>
#include <unordered_set>

namespace depthnav {

namespace {

std::vector<int> mlp_dims(int in, int hidden_units, int hidden_layers, int out) {
    std::vector<int> dims;
    dims.push_back(in);
    for (int i = 0; i < hidden_layers; ++i) dims.push_back(hidden_units);
    dims.push_back(out);
    return dims;
}

}  // namespace

ReplayBuffer::ReplayBuffer(int state_dim, std::size_t capacity)
    : state_dim_(state_dim), capacity_(capacity) {
    if (state_dim <= 0 || capacity == 0)
        throw std::invalid_argument("replay buffer needs positive dims and capacity");
    s_.resize(state_dim_, static_cast<long>(capacity_));
    s_next_.resize(state_dim_, static_cast<long>(capacity_));
    a_.resize(2, static_cast<long>(capacity_));
    r_.resize(static_cast<long>(capacity_));
    done_.resize(static_cast<long>(capacity_));
}

void ReplayBuffer::push(const Eigen::VectorXd& s, const Eigen::Vector2d& a_raw, double r,
                        const Eigen::VectorXd& s_next, bool done) {
    if (s.size() != state_dim_ || s_next.size() != state_dim_)
        throw std::invalid_argument("transition state dimension mismatch");
    const long slot = static_cast<long>(head_);
    s_.col(slot) = s;
    s_next_.col(slot) = s_next;
    a_.col(slot) = a_raw;
    r_[slot] = r;
    done_[slot] = done ? 1.0 : 0.0;
    head_ = (head_ + 1) % capacity_;
    if (size_ < capacity_) ++size_;
}

std::size_t ReplayBuffer::physical(std::size_t logical) const {
    if (logical >= size_) throw std::out_of_range("replay index out of range");
    if (size_ < capacity_) return logical;
    return (head_ + logical) % capacity_;
}

Eigen::VectorXd ReplayBuffer::state_at(std::size_t i) const {
    return s_.col(static_cast<long>(physical(i)));
}
Eigen::Vector2d ReplayBuffer::action_at(std::size_t i) const {
    return a_.col(static_cast<long>(physical(i)));
}
double ReplayBuffer::reward_at(std::size_t i) const { return r_[static_cast<long>(physical(i))]; }
Eigen::VectorXd ReplayBuffer::next_state_at(std::size_t i) const {
    return s_next_.col(static_cast<long>(physical(i)));
}
bool ReplayBuffer::done_at(std::size_t i) const { return done_[static_cast<long>(physical(i))] != 0.0; }

std::vector<std::size_t> ReplayBuffer::sample_indices(int batch_size, RandomStream& rng) const {
    if (batch_size <= 0 || static_cast<std::size_t>(batch_size) > size_)
        throw std::invalid_argument("batch size exceeds buffer size");
    const std::size_t n = size_;
    const std::size_t k = static_cast<std::size_t>(batch_size);

    std::vector<std::size_t> out;
    out.reserve(k);
    std::unordered_set<std::size_t> seen;
    for (std::size_t j = n - k; j < n; ++j) {
        const std::size_t t = rng.below(j + 1);
        if (seen.insert(t).second) {
            out.push_back(t);
        } else {
            seen.insert(j);
            out.push_back(j);
        }
    }
    return out;
}

ReplayBuffer::Batch ReplayBuffer::gather(const std::vector<std::size_t>& indices) const {
    Batch batch;
    const long b = static_cast<long>(indices.size());
    batch.s.resize(state_dim_, b);
    batch.s_next.resize(state_dim_, b);
    batch.a.resize(2, b);
    batch.r.resize(b);
    batch.done.resize(b);
    for (long i = 0; i < b; ++i) {
        const long p = static_cast<long>(physical(indices[static_cast<std::size_t>(i)]));
        batch.s.col(i) = s_.col(p);
        batch.s_next.col(i) = s_next_.col(p);
        batch.a.col(i) = a_.col(p);
        batch.r[i] = r_[p];
        batch.done[i] = done_[p];
    }
    return batch;
}

SacAgent::SacAgent(int state_dim, const SacConfig& cfg, std::uint64_t init_seed)
    : state_dim_(state_dim), cfg_(cfg) {
    if (state_dim <= 0) throw std::invalid_argument("state_dim must be positive");
    if (cfg.alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
    if (cfg.gamma <= 0.0 || cfg.gamma >= 1.0) throw std::invalid_argument("gamma must be in (0,1)");
    if (cfg.tau <= 0.0 || cfg.tau > 1.0) throw std::invalid_argument("tau must be in (0,1]");

    head_.log_std_min = cfg.log_std_min;
    head_.log_std_max = cfg.log_std_max;

    RandomStream rng(init_seed);
    using nn::Activation;
    policy_ = nn::Mlp(mlp_dims(state_dim, cfg.hidden_units, cfg.hidden_layers, 4),
                      Activation::LeakyRelu, Activation::Identity, rng);
    q_ = nn::Mlp(mlp_dims(state_dim + 2, cfg.hidden_units, cfg.hidden_layers, 1),
                 Activation::LeakyRelu, Activation::Identity, rng);
    value_ = nn::Mlp(mlp_dims(state_dim, cfg.hidden_units, cfg.hidden_layers, 1),
                     Activation::LeakyRelu, Activation::Identity, rng);
    value_target_ = value_;  // hard copy at start

    policy_opt_ = nn::AdamState(policy_);
    q_opt_ = nn::AdamState(q_);
    value_opt_ = nn::AdamState(value_);
}

Eigen::MatrixXd SacAgent::draw_noise(long batch, RandomStream& rng) {
    Eigen::MatrixXd noise(2, batch);
    for (long b = 0; b < batch; ++b)
        for (long i = 0; i < 2; ++i) noise(i, b) = rng.normal();
    return noise;
}

Eigen::MatrixXd SacAgent::q_input(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a_raw) const {
    Eigen::MatrixXd in(s.rows() + 2, s.cols());
    in.topRows(s.rows()) = s;
    in.bottomRows(2) = a_raw;
    return in;
}

ActionSample SacAgent::select_action(const Eigen::VectorXd& state, ActionMode mode,
                                     RandomStream& rng) const {
    if (state.size() != state_dim_) throw std::invalid_argument("state dimension mismatch");

    const Eigen::MatrixXd net_out = policy_.forward(state);
    Eigen::MatrixXd noise = Eigen::MatrixXd::Zero(2, 1);
    if (mode == ActionMode::Stochastic) noise = draw_noise(1, rng);

    const nn::SquashedSample sample = head_.sample(net_out, noise);
    ActionSample action;
    action.raw = sample.raw.col(0);
    action.log_prob = sample.log_prob[0];
    action.v = (action.raw[0] + 1.0) * 0.5 * cfg_.v_max;
    action.w = action.raw[1] * cfg_.w_max;
    return action;
}

double SacAgent::q_loss(const ReplayBuffer::Batch& batch, std::vector<nn::ParamGrad>* grads) const {
    const long b = batch.s.cols();
    if (b == 0) throw std::invalid_argument("empty batch");

    const Eigen::MatrixXd v_next = value_target_.forward(batch.s_next);  // 1 x B
    const Eigen::VectorXd target =
        batch.r.array() +
        cfg_.gamma * (1.0 - batch.done.array()) * v_next.row(0).transpose().array();

    nn::Mlp::Cache cache;
    const Eigen::MatrixXd q_val = q_.forward(q_input(batch.s, batch.a), cache);
    const Eigen::VectorXd residual = q_val.row(0).transpose() - target;

    const double loss = 0.5 * residual.squaredNorm() / static_cast<double>(b);
    if (grads) {
        const Eigen::MatrixXd grad_q = residual.transpose() / static_cast<double>(b);
        q_.backward(cache, grad_q, *grads);
    }
    return loss;
}

double SacAgent::v_loss(const ReplayBuffer::Batch& batch, const Eigen::MatrixXd& noise,
                        std::vector<nn::ParamGrad>* grads) const {
    const long b = batch.s.cols();
    if (b == 0) throw std::invalid_argument("empty batch");

    // Constant target: Q under a fresh policy sample, minus the entropy term.
    const Eigen::MatrixXd net_out = policy_.forward(batch.s);
    const nn::SquashedSample sample = head_.sample(net_out, noise);
    const Eigen::MatrixXd q_val = q_.forward(q_input(batch.s, sample.raw));
    const Eigen::VectorXd target =
        q_val.row(0).transpose() - cfg_.alpha * sample.log_prob;

    nn::Mlp::Cache cache;
    const Eigen::MatrixXd v_val = value_.forward(batch.s, cache);
    const Eigen::VectorXd residual = v_val.row(0).transpose() - target;

    const double loss = 0.5 * residual.squaredNorm() / static_cast<double>(b);
    if (grads) {
        const Eigen::MatrixXd grad_v = residual.transpose() / static_cast<double>(b);
        value_.backward(cache, grad_v, *grads);
    }
    return loss;
}

double SacAgent::policy_loss(const ReplayBuffer::Batch& batch, const Eigen::MatrixXd& noise,
                             std::vector<nn::ParamGrad>* grads) const {
    const long b = batch.s.cols();
    if (b == 0) throw std::invalid_argument("empty batch");
    const double inv_b = 1.0 / static_cast<double>(b);

    nn::Mlp::Cache policy_cache;
    const Eigen::MatrixXd net_out = policy_.forward(batch.s, policy_cache);
    const nn::SquashedSample sample = head_.sample(net_out, noise);

    nn::Mlp::Cache q_cache;
    const Eigen::MatrixXd q_val = q_.forward(q_input(batch.s, sample.raw), q_cache);

    const double loss =
        (cfg_.alpha * sample.log_prob.array() - q_val.row(0).transpose().array()).mean();

    if (grads) {
        // dL/dQ = -1/B per sample; pull it back to the action input of Q.
        const Eigen::MatrixXd grad_q_out =
            Eigen::MatrixXd::Constant(1, b, -inv_b);
        const Eigen::MatrixXd grad_q_in = q_.input_gradient(q_cache, grad_q_out);
        const Eigen::MatrixXd grad_raw = grad_q_in.bottomRows(2);
        const Eigen::VectorXd grad_log_prob =
            Eigen::VectorXd::Constant(b, cfg_.alpha * inv_b);

        const Eigen::MatrixXd grad_net_out =
            head_.backward(net_out, noise, sample, grad_raw, grad_log_prob);
        policy_.backward(policy_cache, grad_net_out, *grads);
    }
    return loss;
}

void SacAgent::soft_update(double tau) {
    if (tau <= 0.0 || tau > 1.0) throw std::invalid_argument("tau must be in (0,1]");
    for (std::size_t l = 0; l < value_.layers().size(); ++l) {
        nn::Layer& target = value_target_.layers()[l];
        const nn::Layer& source = value_.layers()[l];
        target.weight = tau * source.weight + (1.0 - tau) * target.weight;
        target.bias = tau * source.bias + (1.0 - tau) * target.bias;
    }
}

SacAgent::LossReport SacAgent::train_step(ReplayBuffer& buffer, RandomStream& rng) {
    LossReport report;
    const std::size_t needed = std::max<std::size_t>(
        static_cast<std::size_t>(cfg_.batch_size), static_cast<std::size_t>(cfg_.warmup_transitions));
    if (buffer.size() < needed) return report;  // warm-up: signal via trained=false

    const auto indices = buffer.sample_indices(cfg_.batch_size, rng);
    const ReplayBuffer::Batch batch = buffer.gather(indices);

    auto q_grads = nn::zero_grads_like(q_);
    report.q = q_loss(batch, &q_grads);
    q_opt_.step(q_, q_grads, cfg_.adam);

    const Eigen::MatrixXd v_noise = draw_noise(batch.s.cols(), rng);
    auto v_grads = nn::zero_grads_like(value_);
    report.v = v_loss(batch, v_noise, &v_grads);
    value_opt_.step(value_, v_grads, cfg_.adam);

    const Eigen::MatrixXd pi_noise = draw_noise(batch.s.cols(), rng);
    auto pi_grads = nn::zero_grads_like(policy_);
    report.pi = policy_loss(batch, pi_noise, &pi_grads);
    policy_opt_.step(policy_, pi_grads, cfg_.adam);

    soft_update(cfg_.tau);
    report.trained = true;
    return report;
}

}  // namespace depthnav
