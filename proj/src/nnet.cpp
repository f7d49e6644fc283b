#include "prefadvisor/nnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "prefadvisor/error.hpp"
#include "prefadvisor/random.hpp"

namespace prefadvisor::nnet {

namespace {

// Stream offset so that training shuffles are not correlated with the
// initial weight draws of the same seed.
constexpr std::uint64_t kShuffleStream = 0x9E3779B97F4A7C15ULL;

std::size_t fan_in(const NetworkConfig& config, std::size_t layer) {
  return config.layer_sizes[layer] + (config.use_bias ? 1 : 0);
}

void check_size(std::size_t actual, std::size_t expected, const char* what) {
  if (actual != expected) {
    throw ShapeError(std::string(what) + ": expected length " + std::to_string(expected) +
                     ", got " + std::to_string(actual));
  }
}

void forward_into(const Network& net, std::span<const double> input, ForwardTrace& trace) {
  check_size(input.size(), net.input_size(), "input");
  const std::size_t layers = net.layer_count();
  trace.activations.resize(layers);
  trace.weighted_inputs.resize(layers - 1);
  trace.activations[0].assign(input.begin(), input.end());

  for (std::size_t l = 0; l + 1 < layers; ++l) {
    const Matrix& w = net.weights[l];
    const std::vector<double>& in = trace.activations[l];
    std::vector<double>& z = trace.weighted_inputs[l];
    std::vector<double>& out = trace.activations[l + 1];
    z.resize(w.rows());
    out.resize(w.rows());
    for (std::size_t j = 0; j < w.rows(); ++j) {
      const auto row = w.row(j);
      double sum = std::inner_product(in.begin(), in.end(), row.begin(), 0.0);
      if (net.config.use_bias) sum += row[in.size()];
      z[j] = sum;
      out[j] = sigmoid(sum);
    }
  }
}

void backpropagate_into(const Network& net, const ForwardTrace& trace,
                        std::span<const double> target, Deltas& deltas) {
  check_size(target.size(), net.output_size(), "target");
  const std::size_t last = net.layer_count() - 1;
  deltas.resize(last);

  const auto& out = trace.activations[last];
  auto& out_delta = deltas[last - 1];
  out_delta.resize(out.size());
  for (std::size_t j = 0; j < out.size(); ++j) out_delta[j] = output_delta(target[j], out[j]);

  std::vector<double> column;
  for (std::size_t l = last - 1; l >= 1; --l) {
    const Matrix& downstream = net.weights[l];
    const auto& act = trace.activations[l];
    auto& layer_delta = deltas[l - 1];
    layer_delta.resize(act.size());
    column.resize(downstream.rows());
    for (std::size_t j = 0; j < act.size(); ++j) {
      for (std::size_t k = 0; k < downstream.rows(); ++k) column[k] = downstream(k, j);
      layer_delta[j] = hidden_delta(act[j], deltas[l], column);
    }
  }
}

double squared_error(std::span<const double> target, std::span<const double> output) {
  double sum = 0.0;
  for (std::size_t k = 0; k < output.size(); ++k) {
    const double e = target[k] - output[k];
    sum += e * e;
  }
  return sum;
}

}  // namespace

void NetworkConfig::validate() const {
  if (layer_sizes.size() < 2) throw ConfigError("layer_sizes needs at least two layers");
  for (std::size_t size : layer_sizes) {
    if (size == 0) throw ConfigError("layer_sizes entries must be positive");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be positive");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must lie in [0, 1)");
  if (!(target_mse >= 0.0)) throw ConfigError("target_mse must be non-negative");
  if (!(init_half_range >= 0.0) || !std::isfinite(init_half_range)) {
    throw ConfigError("init_half_range must be non-negative");
  }
}

NetworkConfig NetworkConfig::paper52() { return NetworkConfig{}; }

NetworkConfig NetworkConfig::eval8() {
  NetworkConfig config;
  config.layer_sizes = {8, 30, 8};
  return config;
}

double sigmoid(double z) {
  if (!std::isfinite(z)) throw InvalidArgument("sigmoid: non-finite input");
  return 1.0 / (1.0 + std::exp(-z));
}

double output_delta(double desired, double actual) {
  return (desired - actual) * actual * (1.0 - actual);
}

double hidden_delta(double activation, std::span<const double> downstream_deltas,
                    std::span<const double> downstream_weights) {
  check_size(downstream_weights.size(), downstream_deltas.size(), "downstream weights");
  const double sum = std::inner_product(downstream_deltas.begin(), downstream_deltas.end(),
                                        downstream_weights.begin(), 0.0);
  return activation * (1.0 - activation) * sum;
}

Network constant_network(const NetworkConfig& config, double value) {
  config.validate();
  Network net;
  net.config = config;
  for (std::size_t l = 0; l + 1 < config.layer_sizes.size(); ++l) {
    net.weights.emplace_back(config.layer_sizes[l + 1], fan_in(config, l), value);
    net.prev_delta_w.emplace_back(config.layer_sizes[l + 1], fan_in(config, l), 0.0);
  }
  return net;
}

Network init_weights(const NetworkConfig& config) {
  Network net = constant_network(config, 0.0);
  Rng rng(config.seed);
  const double half = config.init_half_range;
  for (Matrix& w : net.weights) {
    for (double& v : w.values()) v = rng.uniform(-half, half);
  }
  return net;
}

ForwardTrace forward(const Network& net, std::span<const double> input) {
  ForwardTrace trace;
  forward_into(net, input, trace);
  return trace;
}

Deltas backpropagate(const Network& net, const ForwardTrace& trace,
                     std::span<const double> target) {
  Deltas deltas;
  backpropagate_into(net, trace, target, deltas);
  return deltas;
}

void update_weights(Network& net, const ForwardTrace& trace, const Deltas& deltas) {
  check_size(deltas.size(), net.weights.size(), "deltas");
  const double rate = net.config.learning_rate;
  const double momentum = net.config.momentum;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    Matrix& w = net.weights[l];
    Matrix& prev = net.prev_delta_w[l];
    const auto& in = trace.activations[l];
    check_size(deltas[l].size(), w.rows(), "layer deltas");
    for (std::size_t j = 0; j < w.rows(); ++j) {
      const double scaled = rate * deltas[l][j];
      const auto w_row = w.row(j);
      const auto prev_row = prev.row(j);
      for (std::size_t i = 0; i < w.cols(); ++i) {
        // The trailing bias column sees a constant input of 1.
        const double o_i = i < in.size() ? in[i] : 1.0;
        const double step = momentum * prev_row[i] + scaled * o_i;
        w_row[i] += step;
        prev_row[i] = step;
      }
    }
  }
}

double mean_squared_error(const Network& net, std::span<const TrainingPair> records) {
  if (records.empty()) throw EmptyDataError("no training records");
  ForwardTrace trace;
  double sum = 0.0;
  for (const TrainingPair& r : records) {
    check_size(r.target.size(), net.output_size(), "target");
    forward_into(net, r.input, trace);
    sum += squared_error(r.target, trace.output());
  }
  return sum / static_cast<double>(records.size() * net.output_size());
}

TrainReport train(Network& net, std::span<const TrainingPair> records) {
  if (records.empty()) throw EmptyDataError("no training records");
  for (const TrainingPair& r : records) {
    check_size(r.input.size(), net.input_size(), "input");
    check_size(r.target.size(), net.output_size(), "target");
  }

  TrainReport report;
  report.final_mse = mean_squared_error(net, records);

  Rng rng(net.config.seed ^ kShuffleStream);
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  ForwardTrace trace;
  Deltas deltas;

  while (report.final_mse > net.config.target_mse && report.epochs_run < net.config.max_epochs) {
    rng.shuffle(order.begin(), order.end());
    for (std::size_t idx : order) {
      forward_into(net, records[idx].input, trace);
      backpropagate_into(net, trace, records[idx].target, deltas);
      update_weights(net, trace, deltas);
    }
    report.final_mse = mean_squared_error(net, records);
    report.mse_history.push_back(report.final_mse);
    ++report.epochs_run;
  }
  report.converged = report.final_mse <= net.config.target_mse;
  return report;
}

bool gradient_check(const Network& net, const TrainingPair& record, double epsilon,
                    double tolerance, const DeltaFunction& delta_fn) {
  if (!(epsilon > 0.0)) throw InvalidArgument("gradient_check: epsilon must be positive");
  constexpr double kAbsoluteFloor = 1e-8;

  const ForwardTrace trace = forward(net, record.input);
  const Deltas deltas = delta_fn(net, trace, record.target);
  check_size(deltas.size(), net.weights.size(), "deltas");

  ForwardTrace probe_trace;
  auto objective = [&](const Network& probe) {
    forward_into(probe, record.input, probe_trace);
    return 0.5 * squared_error(record.target, probe_trace.output());
  };

  Network probe = net;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    const auto& in = trace.activations[l];
    for (std::size_t j = 0; j < net.weights[l].rows(); ++j) {
      for (std::size_t i = 0; i < net.weights[l].cols(); ++i) {
        const double o_i = i < in.size() ? in[i] : 1.0;
        const double analytic = -deltas[l][j] * o_i;

        const double original = net.weights[l](j, i);
        probe.weights[l](j, i) = original + epsilon;
        const double plus = objective(probe);
        probe.weights[l](j, i) = original - epsilon;
        const double minus = objective(probe);
        probe.weights[l](j, i) = original;
        const double numeric = (plus - minus) / (2.0 * epsilon);

        const double diff = std::abs(analytic - numeric);
        const double scale = std::max(std::abs(analytic), std::abs(numeric));
        if (diff > kAbsoluteFloor && diff > tolerance * scale) return false;
      }
    }
  }
  return true;
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw EmptyDataError("argmax of empty vector");
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) -
                                  values.begin());
}

}  // namespace prefadvisor::nnet
