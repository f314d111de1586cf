#include "depthnav/nn.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace depthnav::nn {

namespace {

constexpr double kTanhCorrectionEps = 1e-6;

Eigen::MatrixXd apply_activation(const Eigen::MatrixXd& z, Activation act) {
    if (act == Activation::Identity) return z;
    return z.unaryExpr([](double v) { return v > 0.0 ? v : kLeakyReluSlope * v; });
}

Eigen::MatrixXd activation_grad(const Eigen::MatrixXd& z, Activation act) {
    if (act == Activation::Identity) return Eigen::MatrixXd::Ones(z.rows(), z.cols());
    return z.unaryExpr([](double v) { return v > 0.0 ? 1.0 : kLeakyReluSlope; });
}

}  // namespace

Mlp::Mlp(const std::vector<int>& dims, Activation hidden, Activation output, RandomStream& rng) {
    if (dims.size() < 2) throw std::invalid_argument("an MLP needs at least input and output dims");
    layers_.reserve(dims.size() - 1);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        Layer layer;
        const int in = dims[l];
        const int out = dims[l + 1];
        if (in <= 0 || out <= 0) throw std::invalid_argument("layer dims must be positive");
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        layer.weight.resize(out, in);
        for (int r = 0; r < out; ++r)
            for (int c = 0; c < in; ++c) layer.weight(r, c) = rng.uniform(-bound, bound);
        layer.bias.resize(out);
        for (int r = 0; r < out; ++r) layer.bias[r] = rng.uniform(-bound, bound);
        layer.activation = (l + 2 == dims.size()) ? output : hidden;
        layers_.push_back(std::move(layer));
    }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
    Cache cache;
    return forward(x, cache);
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Cache& cache) const {
    if (x.rows() != input_dim()) throw std::invalid_argument("input dimension mismatch");
    if (!x.allFinite()) throw std::invalid_argument("non-finite network input");

    cache.layer_in.clear();
    cache.pre.clear();
    cache.layer_in.reserve(layers_.size());
    cache.pre.reserve(layers_.size());

    Eigen::MatrixXd h = x;
    for (const Layer& layer : layers_) {
        cache.layer_in.push_back(h);
        Eigen::MatrixXd z = (layer.weight * h).colwise() + layer.bias;
        cache.pre.push_back(z);
        h = apply_activation(z, layer.activation);
    }
    return h;
}

Eigen::MatrixXd Mlp::backward(const Cache& cache, const Eigen::MatrixXd& grad_out,
                              std::vector<ParamGrad>& grads) const {
    if (!cache.valid()) throw std::logic_error("backward called without a forward cache");
    if (grads.size() != layers_.size()) throw std::logic_error("gradient storage shape mismatch");

    Eigen::MatrixXd g = grad_out;
    for (int l = static_cast<int>(layers_.size()) - 1; l >= 0; --l) {
        const Layer& layer = layers_[static_cast<std::size_t>(l)];
        const Eigen::MatrixXd gz =
            g.cwiseProduct(activation_grad(cache.pre[static_cast<std::size_t>(l)], layer.activation));
        grads[static_cast<std::size_t>(l)].weight.noalias() +=
            gz * cache.layer_in[static_cast<std::size_t>(l)].transpose();
        grads[static_cast<std::size_t>(l)].bias.noalias() += gz.rowwise().sum();
        g.noalias() = layer.weight.transpose() * gz;
    }
    return g;
}

Eigen::MatrixXd Mlp::input_gradient(const Cache& cache, const Eigen::MatrixXd& grad_out) const {
    if (!cache.valid()) throw std::logic_error("input_gradient called without a forward cache");
    Eigen::MatrixXd g = grad_out;
    for (int l = static_cast<int>(layers_.size()) - 1; l >= 0; --l) {
        const Layer& layer = layers_[static_cast<std::size_t>(l)];
        const Eigen::MatrixXd gz =
            g.cwiseProduct(activation_grad(cache.pre[static_cast<std::size_t>(l)], layer.activation));
        g.noalias() = layer.weight.transpose() * gz;
    }
    return g;
}

long Mlp::parameter_count() const {
    long n = 0;
    for (const Layer& layer : layers_) n += layer.weight.size() + layer.bias.size();
    return n;
}

double Mlp::get_parameter(long index) const {
    for (const Layer& layer : layers_) {
        const long w = layer.weight.size();
        if (index < w) {
            const long r = index / layer.weight.cols();
            const long c = index % layer.weight.cols();
            return layer.weight(r, c);
        }
        index -= w;
        if (index < layer.bias.size()) return layer.bias[index];
        index -= layer.bias.size();
    }
    throw std::out_of_range("parameter index out of range");
}

void Mlp::set_parameter(long index, double value) {
    for (Layer& layer : layers_) {
        const long w = layer.weight.size();
        if (index < w) {
            const long r = index / layer.weight.cols();
            const long c = index % layer.weight.cols();
            layer.weight(r, c) = value;
            return;
        }
        index -= w;
        if (index < layer.bias.size()) {
            layer.bias[index] = value;
            return;
        }
        index -= layer.bias.size();
    }
    throw std::out_of_range("parameter index out of range");
}

std::vector<ParamGrad> zero_grads_like(const Mlp& net) {
    std::vector<ParamGrad> grads;
    grads.reserve(net.layers().size());
    for (const Layer& layer : net.layers()) {
        ParamGrad g;
        g.weight = Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols());
        g.bias = Eigen::VectorXd::Zero(layer.bias.size());
        grads.push_back(std::move(g));
    }
    return grads;
}

AdamState::AdamState(const Mlp& net) : m_(zero_grads_like(net)), v_(zero_grads_like(net)) {}

void AdamState::step(Mlp& net, const std::vector<ParamGrad>& grads, const AdamConfig& cfg) {
    if (m_.size() != net.layers().size() || grads.size() != net.layers().size())
        throw std::logic_error("Adam state does not match the network");

    ++t_;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t_));

    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        Layer& layer = net.layers()[l];
        auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
            m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
            v = (cfg.beta2 * v.array() + (1.0 - cfg.beta2) * g.array().square()).matrix();
            param.array() -=
                cfg.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg.eps);
        };
        update(layer.weight, m_[l].weight, v_[l].weight, grads[l].weight);
        update(layer.bias, m_[l].bias, v_[l].bias, grads[l].bias);
    }
}

void AdamState::restore(std::vector<ParamGrad> m, std::vector<ParamGrad> v, long t) {
    m_ = std::move(m);
    v_ = std::move(v);
    t_ = t;
}

SquashedSample GaussianHead::sample(const Eigen::MatrixXd& net_out,
                                    const Eigen::MatrixXd& noise) const {
    const long k = net_out.rows() / 2;
    if (net_out.rows() != 2 * k || k == 0)
        throw std::invalid_argument("head input must stack [mean; log_std]");
    if (noise.rows() != k || noise.cols() != net_out.cols())
        throw std::invalid_argument("noise shape mismatch");
    if (!noise.allFinite()) throw std::invalid_argument("non-finite noise");

    const Eigen::MatrixXd mean = net_out.topRows(k);
    const Eigen::MatrixXd log_std =
        net_out.bottomRows(k).cwiseMax(log_std_min).cwiseMin(log_std_max);
    const Eigen::MatrixXd std_dev = log_std.array().exp().matrix();

    SquashedSample s;
    s.u = mean + std_dev.cwiseProduct(noise);
    s.raw = s.u.array().tanh().matrix();

    constexpr double half_log_two_pi = 0.5 * 1.8378770664093454836;  // ln(2*pi)/2
    s.log_prob = Eigen::VectorXd::Zero(net_out.cols());
    for (long b = 0; b < net_out.cols(); ++b) {
        double lp = 0.0;
        for (long i = 0; i < k; ++i) {
            const double t = s.raw(i, b);
            lp += -half_log_two_pi - log_std(i, b) - 0.5 * noise(i, b) * noise(i, b) -
                  std::log(1.0 - t * t + kTanhCorrectionEps);
        }
        s.log_prob[b] = lp;
    }
    return s;
}

Eigen::MatrixXd GaussianHead::backward(const Eigen::MatrixXd& net_out,
                                       const Eigen::MatrixXd& noise,
                                       const SquashedSample& sample,
                                       const Eigen::MatrixXd& grad_raw,
                                       const Eigen::VectorXd& grad_log_prob) const {
    const long k = net_out.rows() / 2;
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(net_out.rows(), net_out.cols());

    for (long b = 0; b < net_out.cols(); ++b) {
        for (long i = 0; i < k; ++i) {
            const double raw_log_std = net_out(k + i, b);
            const double log_std = std::clamp(raw_log_std, log_std_min, log_std_max);
            const double std_dev = std::exp(log_std);
            const double t = sample.raw(i, b);
            const double one_mt2 = 1.0 - t * t;

            const double dlogp_du = 2.0 * t * one_mt2 / (one_mt2 + kTanhCorrectionEps);
            const double dl_du = grad_raw(i, b) * one_mt2 + grad_log_prob[b] * dlogp_du;

            grad(i, b) = dl_du;  // mean path
            // log_std path; the clamp zeroes the gradient outside its range.
            if (raw_log_std >= log_std_min && raw_log_std <= log_std_max) {
                grad(k + i, b) = dl_du * noise(i, b) * std_dev - grad_log_prob[b];
            }
        }
    }
    return grad;
}

}  // namespace depthnav::nn
