#include "retina/nnet.hpp"

#include <cmath>
#include <string>

#include "retina/errors.hpp"
#include "retina/rng.hpp"

namespace retina {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_dataset(const MLP& mlp, const Dataset& dataset) {
    if (dataset.empty()) throw ContractError("nnet: empty dataset");
    for (const Sample& s : dataset) {
        if (static_cast<int>(s.input.size()) != mlp.input_dim)
            throw ContractError("nnet: sample input dimension mismatch");
        if (static_cast<int>(s.target.size()) != mlp.output_dim)
            throw ContractError("nnet: sample target dimension mismatch");
    }
}

// forward pass keeping hidden activations, for backprop
void forward_full(const MLP& mlp, const std::vector<double>& x, std::vector<double>& hidden,
                  std::vector<double>& output) {
    hidden.resize(mlp.hidden_dim);
    for (int h = 0; h < mlp.hidden_dim; ++h) {
        double z = mlp.hidden_biases[h];
        const double* w = mlp.hidden_weights.data() + static_cast<std::size_t>(h) * mlp.input_dim;
        for (int i = 0; i < mlp.input_dim; ++i) z += w[i] * x[i];
        hidden[h] = sigmoid(z);
    }
    output.resize(mlp.output_dim);
    for (int o = 0; o < mlp.output_dim; ++o) {
        double z = mlp.output_biases[o];
        const double* w = mlp.output_weights.data() + static_cast<std::size_t>(o) * mlp.hidden_dim;
        for (int h = 0; h < mlp.hidden_dim; ++h) z += w[h] * hidden[h];
        output[o] = sigmoid(z);
    }
}

// accumulates the MSE gradient over the dataset; returns the MSE itself
double accumulate_gradient(const MLP& mlp, const Dataset& dataset, Gradient& g) {
    g.hidden_weights.assign(mlp.hidden_weights.size(), 0.0);
    g.hidden_biases.assign(mlp.hidden_biases.size(), 0.0);
    g.output_weights.assign(mlp.output_weights.size(), 0.0);
    g.output_biases.assign(mlp.output_biases.size(), 0.0);

    const double norm = 1.0 / (static_cast<double>(dataset.size()) * mlp.output_dim);
    double loss = 0.0;
    std::vector<double> hidden, output, delta_out(mlp.output_dim), delta_hid(mlp.hidden_dim);
    for (const Sample& s : dataset) {
        forward_full(mlp, s.input, hidden, output);
        for (int o = 0; o < mlp.output_dim; ++o) {
            const double err = output[o] - s.target[o];
            loss += err * err;
            // d(mse)/dz_o = 2/(S*K) * err * y(1-y)
            delta_out[o] = 2.0 * norm * err * output[o] * (1.0 - output[o]);
        }
        for (int h = 0; h < mlp.hidden_dim; ++h) {
            double back = 0.0;
            for (int o = 0; o < mlp.output_dim; ++o)
                back += delta_out[o] * mlp.output_weights[static_cast<std::size_t>(o) * mlp.hidden_dim + h];
            delta_hid[h] = back * hidden[h] * (1.0 - hidden[h]);
        }
        for (int o = 0; o < mlp.output_dim; ++o) {
            double* gw = g.output_weights.data() + static_cast<std::size_t>(o) * mlp.hidden_dim;
            for (int h = 0; h < mlp.hidden_dim; ++h) gw[h] += delta_out[o] * hidden[h];
            g.output_biases[o] += delta_out[o];
        }
        for (int h = 0; h < mlp.hidden_dim; ++h) {
            double* gw = g.hidden_weights.data() + static_cast<std::size_t>(h) * mlp.input_dim;
            for (int i = 0; i < mlp.input_dim; ++i) gw[i] += delta_hid[h] * s.input[i];
            g.hidden_biases[h] += delta_hid[h];
        }
    }
    return loss * norm;
}

} // namespace

MLP init_mlp(int input_dim, int hidden_dim, int output_dim, std::uint64_t seed,
             double init_scale) {
    if (input_dim < 1 || hidden_dim < 1 || output_dim < 1)
        throw ParameterError("init_mlp: all dimensions must be >= 1");
    MLP mlp;
    mlp.input_dim = input_dim;
    mlp.hidden_dim = hidden_dim;
    mlp.output_dim = output_dim;
    Rng rng(seed);
    mlp.hidden_weights.resize(static_cast<std::size_t>(hidden_dim) * input_dim);
    for (double& w : mlp.hidden_weights) w = rng.uniform(-init_scale, init_scale);
    mlp.hidden_biases.assign(hidden_dim, 0.0);
    mlp.output_weights.resize(static_cast<std::size_t>(output_dim) * hidden_dim);
    for (double& w : mlp.output_weights) w = rng.uniform(-init_scale, init_scale);
    mlp.output_biases.assign(output_dim, 0.0);
    return mlp;
}

std::vector<double> forward(const MLP& mlp, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != mlp.input_dim)
        throw ContractError("forward: input dimension mismatch");
    std::vector<double> hidden, output;
    forward_full(mlp, x, hidden, output);
    return output;
}

double mse(const MLP& mlp, const Dataset& dataset) {
    check_dataset(mlp, dataset);
    double loss = 0.0;
    std::vector<double> hidden, output;
    for (const Sample& s : dataset) {
        forward_full(mlp, s.input, hidden, output);
        for (int o = 0; o < mlp.output_dim; ++o) {
            const double err = output[o] - s.target[o];
            loss += err * err;
        }
    }
    return loss / (static_cast<double>(dataset.size()) * mlp.output_dim);
}

Gradient gradient(const MLP& mlp, const Dataset& dataset) {
    check_dataset(mlp, dataset);
    Gradient g;
    accumulate_gradient(mlp, dataset, g);
    return g;
}

TrainResult train(const MLP& mlp, const Dataset& dataset, const TrainConfig& config) {
    check_dataset(mlp, dataset);
    if (!(config.learning_rate > 0.0) && config.learning_rate != 0.0)
        throw ParameterError("train: learning rate must be >= 0");
    if (config.epochs < 1) throw ParameterError("train: epochs must be >= 1");

    TrainResult result;
    result.mlp = mlp;
    Gradient g;
    double loss = 0.0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        loss = accumulate_gradient(result.mlp, dataset, g);
        if (!std::isfinite(loss))
            throw TrainingError("train: loss diverged at epoch " + std::to_string(epoch));
        const double lr = config.learning_rate;
        for (std::size_t i = 0; i < g.hidden_weights.size(); ++i)
            result.mlp.hidden_weights[i] -= lr * g.hidden_weights[i];
        for (std::size_t i = 0; i < g.hidden_biases.size(); ++i)
            result.mlp.hidden_biases[i] -= lr * g.hidden_biases[i];
        for (std::size_t i = 0; i < g.output_weights.size(); ++i)
            result.mlp.output_weights[i] -= lr * g.output_weights[i];
        for (std::size_t i = 0; i < g.output_biases.size(); ++i)
            result.mlp.output_biases[i] -= lr * g.output_biases[i];
    }
    result.final_mse = mse(result.mlp, dataset);
    if (!std::isfinite(result.final_mse))
        throw TrainingError("train: loss diverged at epoch " + std::to_string(config.epochs));
    return result;
}

int predict_class(const MLP& mlp, const std::vector<double>& x) {
    const std::vector<double> y = forward(mlp, x);
    int best = 0;
    for (int o = 1; o < mlp.output_dim; ++o)
        if (y[o] > y[best]) best = o;
    return best;
}

} // namespace retina
