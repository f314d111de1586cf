#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "depthnav/rng.hpp"

namespace depthnav::nn {

enum class Activation { LeakyRelu, Identity };

inline constexpr double kLeakyReluSlope = 0.01;

struct Layer {
    Eigen::MatrixXd weight;  // out x in
    Eigen::VectorXd bias;    // out
    Activation activation = Activation::Identity;
};

// Per-layer gradient (or Adam moment) storage mirroring Layer shapes.
struct ParamGrad {
    Eigen::MatrixXd weight;
    Eigen::VectorXd bias;
};

// Dense multi-layer perceptron over batched column vectors, with explicit
// reverse-mode gradients. All math is in 64-bit floats.
class Mlp {
public:
    Mlp() = default;

    // dims = {input, hidden..., output}. Hidden layers use `hidden`, the last
    // layer `output`. Weights and biases are drawn U(-1/sqrt(fan_in), +1/sqrt(fan_in)).
    Mlp(const std::vector<int>& dims, Activation hidden, Activation output, RandomStream& rng);

    struct Cache {
        std::vector<Eigen::MatrixXd> layer_in;  // input of each layer
        std::vector<Eigen::MatrixXd> pre;       // pre-activation of each layer
        bool valid() const { return !layer_in.empty(); }
    };

    // x is input_dim x batch. Throws std::invalid_argument on non-finite input.
    Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Cache& cache) const;

    // Accumulates parameter gradients for upstream dL/dy and returns dL/dx.
    // `grads` must mirror the layer shapes (see zero_grads_like). Throws
    // std::logic_error when called with an empty cache.
    Eigen::MatrixXd backward(const Cache& cache, const Eigen::MatrixXd& grad_out,
                             std::vector<ParamGrad>& grads) const;

    // dL/dx only, skipping parameter gradients (used where this net is frozen).
    Eigen::MatrixXd input_gradient(const Cache& cache, const Eigen::MatrixXd& grad_out) const;

    int input_dim() const { return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.cols()); }
    int output_dim() const { return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows()); }

    std::vector<Layer>& layers() { return layers_; }
    const std::vector<Layer>& layers() const { return layers_; }

    // Flat parameter view (per layer: weight row-major, then bias). Used by
    // finite-difference checks and the checkpoint format.
    long parameter_count() const;
    double get_parameter(long index) const;
    void set_parameter(long index, double value);

private:
    std::vector<Layer> layers_;
};

std::vector<ParamGrad> zero_grads_like(const Mlp& net);

struct AdamConfig {
    double lr = 3e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Bias-corrected Adam with per-parameter first/second moments.
class AdamState {
public:
    AdamState() = default;
    explicit AdamState(const Mlp& net);

    void step(Mlp& net, const std::vector<ParamGrad>& grads, const AdamConfig& cfg);

    long step_count() const { return t_; }

    std::vector<ParamGrad>& first_moment() { return m_; }
    std::vector<ParamGrad>& second_moment() { return v_; }
    const std::vector<ParamGrad>& first_moment() const { return m_; }
    const std::vector<ParamGrad>& second_moment() const { return v_; }
    void restore(std::vector<ParamGrad> m, std::vector<ParamGrad> v, long t);

private:
    std::vector<ParamGrad> m_, v_;
    long t_ = 0;
};

// Tanh-squashed diagonal Gaussian head. The trunk network emits
// [mean; log_std] stacked per column; log_std is clamped to the given range.
struct SquashedSample {
    Eigen::MatrixXd u;         // pre-tanh draw, mean + std * noise
    Eigen::MatrixXd raw;       // tanh(u), each component in (-1, 1)
    Eigen::VectorXd log_prob;  // log-density of raw per column, tanh-corrected
};

struct GaussianHead {
    double log_std_min = -20.0;
    double log_std_max = 2.0;

    SquashedSample sample(const Eigen::MatrixXd& net_out, const Eigen::MatrixXd& noise) const;

    // Maps upstream gradients w.r.t. raw and log_prob back to gradients w.r.t.
    // the trunk output, treating noise as fixed (reparameterization).
    Eigen::MatrixXd backward(const Eigen::MatrixXd& net_out, const Eigen::MatrixXd& noise,
                             const SquashedSample& sample, const Eigen::MatrixXd& grad_raw,
                             const Eigen::VectorXd& grad_log_prob) const;
};

}  // namespace depthnav::nn
