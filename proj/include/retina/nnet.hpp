#pragma once

#include <cstdint>
#include <vector>

namespace retina {

/// Single-hidden-layer feedforward network with logistic sigmoid on both
/// layers, trained by full-batch gradient descent on mean squared error.
struct MLP {
    int input_dim = 0;
    int hidden_dim = 0;
    int output_dim = 0;
    std::vector<double> hidden_weights; // hidden_dim x input_dim, row-major
    std::vector<double> hidden_biases;  // hidden_dim
    std::vector<double> output_weights; // output_dim x hidden_dim, row-major
    std::vector<double> output_biases;  // output_dim

    std::size_t parameter_count() const {
        return hidden_weights.size() + hidden_biases.size() + output_weights.size() +
               output_biases.size();
    }
};

struct TrainConfig {
    double learning_rate = 0.5;
    int epochs = 2000;
    std::uint64_t seed = 0;
    double init_scale = 0.5; // uniform weight-init half-range
};

/// One labeled sample: scaled features and a one-hot target.
struct Sample {
    std::vector<double> input;
    std::vector<double> target;
};

using Dataset = std::vector<Sample>;

/// Weights i.i.d. uniform in [-init_scale, init_scale], biases zero.
MLP init_mlp(int input_dim, int hidden_dim, int output_dim, std::uint64_t seed,
             double init_scale = 0.5);

/// y = sigmoid(W2 * sigmoid(W1 x + b1) + b2); outputs lie in (0, 1).
std::vector<double> forward(const MLP& mlp, const std::vector<double>& x);

/// Mean over samples and output units of (y - t)^2.
double mse(const MLP& mlp, const Dataset& dataset);

/// Exact analytic gradient of the MSE, in the same layout as the MLP fields.
struct Gradient {
    std::vector<double> hidden_weights;
    std::vector<double> hidden_biases;
    std::vector<double> output_weights;
    std::vector<double> output_biases;
};
Gradient gradient(const MLP& mlp, const Dataset& dataset);

struct TrainResult {
    MLP mlp;
    double final_mse = 0.0;
};

/// Full-batch gradient descent for config.epochs. Throws TrainingError with
/// the epoch index if the loss becomes non-finite.
TrainResult train(const MLP& mlp, const Dataset& dataset, const TrainConfig& config);

/// Argmax over output activations; ties break toward the lower index.
int predict_class(const MLP& mlp, const std::vector<double>& x);

} // namespace retina
