#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "depthnav/nn.hpp"
#include "depthnav/rng.hpp"

namespace depthnav {

struct SacConfig {
    double alpha = 0.2;   // entropy temperature, fixed
    double gamma = 0.99;  // discount
    double tau = 0.05;    // target smoothing coefficient (1 = hard copy)
    int batch_size = 256;
    std::size_t replay_capacity = 1000000;
    int warmup_transitions = 1000;
    int hidden_units = 256;
    int hidden_layers = 2;
    nn::AdamConfig adam{};       // same optimizer settings for all three nets
    double v_max = 1.0;          // linear action bound [0, v_max]
    double w_max = 1.0;          // angular action bound [-w_max, w_max]
    double log_std_min = -20.0;
    double log_std_max = 2.0;
};

// Uniform-sampling ring buffer of transitions. Actions are stored in the
// normalized (-1, 1) range the squashed policy emits, before the affine map
// to physical bounds.
class ReplayBuffer {
public:
    ReplayBuffer(int state_dim, std::size_t capacity);

    void push(const Eigen::VectorXd& s, const Eigen::Vector2d& a_raw, double r,
              const Eigen::VectorXd& s_next, bool done);

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return capacity_; }
    int state_dim() const { return state_dim_; }

    // Logical index 0 = oldest retained transition.
    Eigen::VectorXd state_at(std::size_t i) const;
    Eigen::Vector2d action_at(std::size_t i) const;
    double reward_at(std::size_t i) const;
    Eigen::VectorXd next_state_at(std::size_t i) const;
    bool done_at(std::size_t i) const;

    // Uniform sample of distinct indices (Floyd's algorithm).
    std::vector<std::size_t> sample_indices(int batch_size, RandomStream& rng) const;

    struct Batch {
        Eigen::MatrixXd s;       // state_dim x B
        Eigen::MatrixXd a;       // 2 x B
        Eigen::MatrixXd s_next;  // state_dim x B
        Eigen::VectorXd r;       // B
        Eigen::VectorXd done;    // B, 1.0 when terminal
    };

    Batch gather(const std::vector<std::size_t>& indices) const;

private:
    std::size_t physical(std::size_t logical) const;

    int state_dim_;
    std::size_t capacity_;
    std::size_t size_ = 0;
    std::size_t head_ = 0;  // next write slot
    Eigen::MatrixXd s_, s_next_;
    Eigen::Matrix2Xd a_;
    Eigen::VectorXd r_, done_;
};

enum class ActionMode { Stochastic, Deterministic };

struct ActionSample {
    double v = 0.0;              // m/s, mapped to [0, v_max]
    double w = 0.0;              // rad/s, mapped to [-w_max, w_max]
    Eigen::Vector2d raw{0, 0};   // squashed action in (-1, 1)^2 (replay format)
    double log_prob = 0.0;
};

// Soft Actor-Critic with a single Q function, a state-value function and its
// Polyak-averaged target. Training mutates the agent on one thread; copies
// can be evaluated concurrently.
class SacAgent {
public:
    SacAgent(int state_dim, const SacConfig& cfg, std::uint64_t init_seed);

    ActionSample select_action(const Eigen::VectorXd& state, ActionMode mode,
                               RandomStream& rng) const;

    // Soft Bellman residual: mean over the batch of
    //   1/2 (Q(s,a) - (r + gamma * (1-done) * V_target(s')))^2.
    // Gradients (if requested) are w.r.t. Q parameters only.
    double q_loss(const ReplayBuffer::Batch& batch, std::vector<nn::ParamGrad>* grads = nullptr) const;

    // Value regression toward Q(s, a~) - alpha * log pi(a~|s) with fresh
    // actions a~ drawn via `noise` (2 x B standard normal). The target is a
    // constant; gradients flow into V only.
    double v_loss(const ReplayBuffer::Batch& batch, const Eigen::MatrixXd& noise,
                  std::vector<nn::ParamGrad>* grads = nullptr) const;

    // Reparameterized policy objective: mean of alpha * log pi(a~|s) - Q(s, a~).
    // Gradients reach the policy through the sampled action; Q is frozen.
    double policy_loss(const ReplayBuffer::Batch& batch, const Eigen::MatrixXd& noise,
                       std::vector<nn::ParamGrad>* grads = nullptr) const;

    // V_target <- tau * V + (1 - tau) * V_target, elementwise.
    void soft_update(double tau);

    struct LossReport {
        double q = 0.0;
        double v = 0.0;
        double pi = 0.0;
        bool trained = false;  // false while the buffer is warming up
    };

    // One update: sample a batch, then Q step, V step, policy step, soft
    // target update. A buffer below max(warmup, batch_size) is a no-op.
    LossReport train_step(ReplayBuffer& buffer, RandomStream& rng);

    int state_dim() const { return state_dim_; }
    const SacConfig& config() const { return cfg_; }

    nn::Mlp& policy_net() { return policy_; }
    nn::Mlp& q_net() { return q_; }
    nn::Mlp& value_net() { return value_; }
    nn::Mlp& value_target_net() { return value_target_; }
    const nn::Mlp& policy_net() const { return policy_; }
    const nn::Mlp& q_net() const { return q_; }
    const nn::Mlp& value_net() const { return value_; }
    const nn::Mlp& value_target_net() const { return value_target_; }
    nn::AdamState& policy_opt() { return policy_opt_; }
    nn::AdamState& q_opt() { return q_opt_; }
    nn::AdamState& value_opt() { return value_opt_; }
    const nn::AdamState& policy_opt() const { return policy_opt_; }
    const nn::AdamState& q_opt() const { return q_opt_; }
    const nn::AdamState& value_opt() const { return value_opt_; }
    const nn::GaussianHead& head() const { return head_; }

    // Draws a 2 x B standard-normal matrix from `rng` (the sampling noise the
    // stochastic losses consume).
    static Eigen::MatrixXd draw_noise(long batch, RandomStream& rng);

private:
    Eigen::MatrixXd q_input(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a_raw) const;

    int state_dim_;
    SacConfig cfg_;
    nn::GaussianHead head_;
    nn::Mlp policy_, q_, value_, value_target_;
    nn::AdamState policy_opt_, q_opt_, value_opt_;
};

}  // namespace depthnav
