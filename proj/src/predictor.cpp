#include "fpm/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fpm {

namespace {

// Uniform in [0, 1) from the top 53 bits; independent of the standard library's
// distribution implementations.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Gradients zero_like(const MlpModel& model) {
    Gradients g;
    g.reserve(model.layers.size());
    for (const auto& l : model.layers) {
        g.push_back({l.fan_in, l.fan_out, std::vector<double>(l.weights.size(), 0.0),
                     std::vector<double>(l.biases.size(), 0.0)});
    }
    return g;
}

void forward_into(const MlpModel& model, std::span<const double> input, std::vector<std::vector<double>>& acts) {
    acts.resize(model.layers.size() + 1);
    acts[0].assign(input.begin(), input.end());
    for (std::size_t li = 0; li < model.layers.size(); ++li) {
        const DenseLayer& l = model.layers[li];
        const bool hidden = li + 1 < model.layers.size();
        const auto& in = acts[li];
        auto& out = acts[li + 1];
        out.resize(l.fan_out);
        for (std::size_t o = 0; o < l.fan_out; ++o) {
            const double* w = l.weights.data() + o * l.fan_in;
            double z = l.biases[o];
            for (std::size_t i = 0; i < l.fan_in; ++i) z += w[i] * in[i];
            out[o] = hidden ? std::tanh(z) : z;
        }
    }
}

// Adds d(loss)/d(params) into `grads`; returns the pair loss.
double backprop_into(const MlpModel& model, std::span<const double> input, std::span<const double> target,
                     Gradients& grads, std::vector<std::vector<double>>& acts, std::vector<double>& delta,
                     std::vector<double>& next_delta) {
    forward_into(model, input, acts);
    const auto& out = acts.back();

    delta.resize(out.size());
    double loss = 0.0;
    for (std::size_t o = 0; o < out.size(); ++o) {
        delta[o] = out[o] - target[o];
        loss += delta[o] * delta[o];
    }
    loss *= 0.5;

    for (std::size_t li = model.layers.size(); li-- > 0;) {
        const DenseLayer& l = model.layers[li];
        DenseLayer& g = grads[li];
        const auto& in = acts[li];
        for (std::size_t o = 0; o < l.fan_out; ++o) {
            double* gw = g.weights.data() + o * l.fan_in;
            for (std::size_t i = 0; i < l.fan_in; ++i) gw[i] += delta[o] * in[i];
            g.biases[o] += delta[o];
        }
        if (li == 0) break;
        next_delta.assign(l.fan_in, 0.0);
        for (std::size_t o = 0; o < l.fan_out; ++o) {
            const double* w = l.weights.data() + o * l.fan_in;
            for (std::size_t i = 0; i < l.fan_in; ++i) next_delta[i] += w[i] * delta[o];
        }
        // previous layer is hidden: tanh' = 1 - tanh^2
        for (std::size_t i = 0; i < l.fan_in; ++i) next_delta[i] *= 1.0 - in[i] * in[i];
        std::swap(delta, next_delta);
    }
    return loss;
}

void check_lengths(const MlpModel& model, std::size_t input, std::size_t target) {
    if (input != model.spec.inputs()) {
        throw LengthMismatch("network expects " + std::to_string(model.spec.inputs()) + " inputs, got " +
                             std::to_string(input));
    }
    if (target != model.spec.outputs()) {
        throw LengthMismatch("network produces " + std::to_string(model.spec.outputs()) + " outputs, target has " +
                             std::to_string(target));
    }
}

}  // namespace

void LayerSpec::validate() const {
    if (sizes.size() < 2) throw ConfigError("layer spec needs at least input and output widths");
    for (auto s : sizes) {
        if (s == 0) throw ConfigError("layer widths must be >= 1");
    }
}

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0 && learning_rate <= 1.0)) throw ConfigError("learning_rate must lie in [0, 1]");
    if (epochs == 0) throw ConfigError("epochs must be >= 1");
    if (window == 0) throw ConfigError("window must be >= 1");
}

std::vector<TrainingPair> build_training_pairs(std::span<const FeatureVector> gfvs, std::size_t k) {
    if (k == 0) throw ConfigError("window must be >= 1");
    if (gfvs.size() < k + 1) {
        throw SequenceTooShort("need at least " + std::to_string(k + 1) + " GFVs for window " + std::to_string(k) +
                               ", got " + std::to_string(gfvs.size()));
    }
    std::vector<TrainingPair> pairs;
    pairs.reserve(gfvs.size() - k);
    for (std::size_t i = 0; i + k < gfvs.size(); ++i) {
        TrainingPair p;
        for (std::size_t j = i; j < i + k; ++j) p.input.insert(p.input.end(), gfvs[j].begin(), gfvs[j].end());
        p.target = gfvs[i + k];
        pairs.push_back(std::move(p));
    }
    return pairs;
}

std::size_t default_hidden_width(std::size_t n_in) { return std::max<std::size_t>(16, 2 * n_in / 3); }

MlpModel mlp_init(const LayerSpec& spec, std::uint64_t seed) {
    spec.validate();
    MlpModel model;
    model.spec = spec;
    model.seed = seed;
    std::mt19937_64 rng(seed);
    for (std::size_t li = 0; li + 1 < spec.sizes.size(); ++li) {
        DenseLayer l;
        l.fan_in = spec.sizes[li];
        l.fan_out = spec.sizes[li + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(l.fan_in + l.fan_out));
        l.weights.resize(l.fan_in * l.fan_out);
        for (double& w : l.weights) w = bound * (2.0 * unit_uniform(rng) - 1.0);
        l.biases.assign(l.fan_out, 0.0);
        model.layers.push_back(std::move(l));
    }
    return model;
}

ForwardPass mlp_forward(const MlpModel& model, std::span<const double> input) {
    check_lengths(model, input.size(), model.spec.outputs());
    ForwardPass pass;
    forward_into(model, input, pass.activations);
    return pass;
}

Backprop mlp_backprop(const MlpModel& model, std::span<const double> input, std::span<const double> target) {
    check_lengths(model, input.size(), target.size());
    Backprop result{zero_like(model), 0.0};
    std::vector<std::vector<double>> acts;
    std::vector<double> delta, next_delta;
    result.loss = backprop_into(model, input, target, result.gradients, acts, delta, next_delta);
    return result;
}

TrainResult mlp_train(MlpModel model, std::span<const TrainingPair> pairs, const TrainConfig& cfg) {
    cfg.validate();
    if (pairs.empty()) throw SequenceTooShort("no training pairs");

    const double inv_scale = 1.0 / model.feature_scale;
    std::vector<TrainingPair> scaled(pairs.begin(), pairs.end());
    for (auto& p : scaled) {
        check_lengths(model, p.input.size(), p.target.size());
        for (double& v : p.input) v *= inv_scale;
        for (double& v : p.target) v *= inv_scale;
    }

    const double inv_n = 1.0 / static_cast<double>(scaled.size());
    Gradients grads = zero_like(model);
    std::vector<std::vector<double>> acts;
    std::vector<double> delta, next_delta;

    auto epoch_loss = [&](bool accumulate) {
        for (auto& g : grads) {
            std::fill(g.weights.begin(), g.weights.end(), 0.0);
            std::fill(g.biases.begin(), g.biases.end(), 0.0);
        }
        double total = 0.0;
        for (const auto& p : scaled) {
            if (accumulate) {
                total += backprop_into(model, p.input, p.target, grads, acts, delta, next_delta);
            } else {
                forward_into(model, p.input, acts);
                double l = 0.0;
                for (std::size_t o = 0; o < p.target.size(); ++o) {
                    const double e = acts.back()[o] - p.target[o];
                    l += e * e;
                }
                total += 0.5 * l;
            }
        }
        return total * inv_n;
    };

    TrainReport report;
    report.loss_curve.reserve(cfg.epochs);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double loss = epoch_loss(true);
        if (!std::isfinite(loss)) {
            report.final_loss = report.loss_curve.empty() ? loss : report.loss_curve.back();
            throw NonFiniteLoss("training loss became non-finite at epoch " + std::to_string(epoch), report);
        }
        if (epoch == 0) report.initial_loss = loss;
        report.loss_curve.push_back(loss);
        report.epochs_run = epoch + 1;

        const double step = cfg.learning_rate * inv_n;
        for (std::size_t li = 0; li < model.layers.size(); ++li) {
            auto& l = model.layers[li];
            const auto& g = grads[li];
            for (std::size_t i = 0; i < l.weights.size(); ++i) l.weights[i] -= step * g.weights[i];
            for (std::size_t i = 0; i < l.biases.size(); ++i) l.biases[i] -= step * g.biases[i];
        }
    }

    report.final_loss = epoch_loss(false);
    if (!std::isfinite(report.final_loss)) {
        throw NonFiniteLoss("training loss became non-finite after the final update", report);
    }
    return {std::move(model), std::move(report)};
}

FeatureVector predict_next(const MlpModel& model, std::span<const FeatureVector> window) {
    std::vector<double> input;
    input.reserve(model.spec.inputs());
    for (const auto& g : window) input.insert(input.end(), g.begin(), g.end());
    if (input.size() != model.spec.inputs()) {
        throw LengthMismatch("prediction window has " + std::to_string(input.size()) + " values, network expects " +
                             std::to_string(model.spec.inputs()));
    }
    const double inv_scale = 1.0 / model.feature_scale;
    for (double& v : input) v *= inv_scale;

    std::vector<std::vector<double>> acts;
    forward_into(model, input, acts);
    FeatureVector out = std::move(acts.back());
    for (double& v : out) v *= model.feature_scale;
    return out;
}

}  // namespace fpm
