#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fpm/error.hpp"
#include "fpm/features.hpp"

namespace fpm {

/// Layer widths [n_in, hidden..., n_out]; hidden layers use tanh, output is linear.
struct LayerSpec {
    std::vector<std::size_t> sizes;

    void validate() const;
    std::size_t inputs() const { return sizes.front(); }
    std::size_t outputs() const { return sizes.back(); }
    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct DenseLayer {
    std::size_t fan_in = 0;
    std::size_t fan_out = 0;
    std::vector<double> weights;  // fan_out x fan_in, row-major
    std::vector<double> biases;   // fan_out

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct MlpModel {
    LayerSpec spec;
    std::vector<DenseLayer> layers;
    std::uint64_t seed = 0;
    // GFVs are divided by this before entering the network and outputs are
    // multiplied by it; keeps tanh units out of saturation for large spectra.
    double feature_scale = 1.0;

    friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

using Gradients = std::vector<DenseLayer>;

enum class TrainMode { subject, corpus };

struct TrainConfig {
    double learning_rate = 0.01;
    std::size_t epochs = 5000;
    std::size_t window = 3;
    std::uint64_t seed = 42;
    TrainMode mode = TrainMode::corpus;

    void validate() const;
};

struct TrainReport {
    double initial_loss = 0.0;
    double final_loss = 0.0;
    std::size_t epochs_run = 0;
    std::vector<double> loss_curve;
};

/// Raised when training diverges; carries the report up to the failing epoch.
class NonFiniteLoss : public Error {
public:
    NonFiniteLoss(const std::string& what, TrainReport partial)
        : Error(what), report(std::move(partial)) {}
    TrainReport report;
};

struct TrainingPair {
    std::vector<double> input;   // k concatenated GFVs, oldest first
    std::vector<double> target;  // the GFV that follows
};

/// Sliding window over an age-ordered GFV list: m GFVs yield m - k pairs.
std::vector<TrainingPair> build_training_pairs(std::span<const FeatureVector> gfvs, std::size_t k);

/// Hidden width used when none is configured: max(16, 2 * n_in / 3).
std::size_t default_hidden_width(std::size_t n_in);

/// Glorot-uniform weights from a seeded mt19937_64, zero biases.
MlpModel mlp_init(const LayerSpec& spec, std::uint64_t seed);

struct ForwardPass {
    std::vector<std::vector<double>> activations;  // [0] = input, back() = output
    const std::vector<double>& output() const { return activations.back(); }
};

ForwardPass mlp_forward(const MlpModel& model, std::span<const double> input);

struct Backprop {
    Gradients gradients;
    double loss = 0.0;  // 0.5 * ||output - target||^2
};

Backprop mlp_backprop(const MlpModel& model, std::span<const double> input, std::span<const double> target);

/// Full-batch gradient descent on the mean pair loss. Pairs are in GFV units;
/// they are divided by model.feature_scale before reaching the network.
struct TrainResult {
    MlpModel model;
    TrainReport report;
};
TrainResult mlp_train(MlpModel model, std::span<const TrainingPair> pairs, const TrainConfig& cfg);

/// Predicts the GFV following `window` (k GFVs, oldest first).
FeatureVector predict_next(const MlpModel& model, std::span<const FeatureVector> window);

}  // namespace fpm
