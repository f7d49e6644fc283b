#pragma once

// Feedforward sigmoid network trained by online backpropagation with a
// momentum term.
//
// Conventions used throughout:
//   weights[l](j, i)  connection from unit i of layer l to unit j of layer l+1
//   z_j = sum_i w_ji * o_i,  o_j = 1 / (1 + exp(-z_j))
//   output slope   delta_j = (d_j - o_j) * o_j * (1 - o_j)
//   hidden slope   delta_j = o_j * (1 - o_j) * sum_k delta_k * w_kj
//   update         w += momentum * (w(n) - w(n-1)) + learning_rate * delta_j * o_i
// When use_bias is set, each weight matrix gets one extra trailing column fed
// by a constant 1.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "prefadvisor/matrix.hpp"

namespace prefadvisor::nnet {

struct NetworkConfig {
  std::vector<std::size_t> layer_sizes{8, 30, 52};
  double learning_rate = 0.2;
  double momentum = 0.5;
  std::size_t max_epochs = 5000;
  double target_mse = 0.01;
  std::uint64_t seed = 0;
  double init_half_range = 0.5;
  bool use_bias = false;

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;

  /// 8-30-52: one output per mixed color of the full catalog.
  static NetworkConfig paper52();
  /// 8-30-8: one output per evaluated product sample.
  static NetworkConfig eval8();
};

struct Network {
  NetworkConfig config;
  std::vector<Matrix> weights;
  /// Last step applied to each weight, i.e. w(n) - w(n-1). Zero at construction.
  std::vector<Matrix> prev_delta_w;

  std::size_t input_size() const { return config.layer_sizes.front(); }
  std::size_t output_size() const { return config.layer_sizes.back(); }
  std::size_t layer_count() const { return config.layer_sizes.size(); }
};

struct ForwardTrace {
  /// activations[0] is the raw input, activations.back() the network output.
  std::vector<std::vector<double>> activations;
  /// weighted_inputs[l] belongs to activations[l + 1].
  std::vector<std::vector<double>> weighted_inputs;

  std::span<const double> output() const& { return activations.back(); }
  std::span<const double> output() const&& = delete;
};

/// One slope vector per non-input layer; deltas[l] pairs with weights[l].
using Deltas = std::vector<std::vector<double>>;

struct TrainingPair {
  std::vector<double> input;
  std::vector<double> target;
};

struct TrainReport {
  std::size_t epochs_run = 0;
  std::vector<double> mse_history;
  bool converged = false;
  double final_mse = 0.0;

  friend bool operator==(const TrainReport&, const TrainReport&) = default;
};

double sigmoid(double z);

double output_delta(double desired, double actual);

double hidden_delta(double activation, std::span<const double> downstream_deltas,
                    std::span<const double> downstream_weights);

/// Network with weights drawn uniformly from [-init_half_range, init_half_range].
Network init_weights(const NetworkConfig& config);

/// Network of the given configuration with every weight set to `value`.
Network constant_network(const NetworkConfig& config, double value);

ForwardTrace forward(const Network& net, std::span<const double> input);

/// Slopes for every non-input layer given a trace and the desired output.
Deltas backpropagate(const Network& net, const ForwardTrace& trace,
                     std::span<const double> target);

/// Applies one momentum step in place and records it in prev_delta_w.
void update_weights(Network& net, const ForwardTrace& trace, const Deltas& deltas);

/// Mean over records and output units of (d - o)^2.
double mean_squared_error(const Network& net, std::span<const TrainingPair> records);

/// Online training with a seeded per-epoch shuffle. Stops once the epoch MSE
/// reaches target_mse or after max_epochs.
TrainReport train(Network& net, std::span<const TrainingPair> records);

using DeltaFunction =
    std::function<Deltas(const Network&, const ForwardTrace&, std::span<const double>)>;

/// Compares backprop gradients of E = 1/2 * sum_k (d_k - o_k)^2 against
/// central finite differences. The analytic partial for w_ji is -delta_j * o_i.
/// A weight passes when |analytic - numeric| <= tolerance * max(|analytic|,
/// |numeric|) or the difference is below 1e-8.
bool gradient_check(const Network& net, const TrainingPair& record, double epsilon,
                    double tolerance, const DeltaFunction& deltas = backpropagate);

std::size_t argmax(std::span<const double> values);

}  // namespace prefadvisor::nnet
