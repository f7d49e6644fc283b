#pragma once

// Settings for one CLI invocation, merged as defaults < config file < flags.
// The config file is JSON; its path comes from --config or, failing that,
// the PREFADVISOR_CONFIG environment variable.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "prefadvisor/nnet.hpp"
#include "prefadvisor/report.hpp"

namespace prefadvisor::cli {

/// Values as given on the command line; unset means "not given".
struct FlagValues {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<std::string> out;

  std::optional<std::string> fixture;
  std::optional<std::string> data;
  std::optional<std::size_t> samples;
  std::optional<std::string> preset;
  std::optional<std::string> layers;
  std::optional<double> learning_rate;
  std::optional<double> momentum;
  std::optional<std::size_t> max_epochs;
  std::optional<double> target_mse;
  std::optional<double> init_half_range;
  std::optional<bool> use_bias;

  std::optional<std::string> model;
  std::optional<std::string> rules;
  std::optional<double> nn_weight;
  std::optional<std::string> pairing;
  std::optional<long long> per_group;
};

struct RunConfig {
  nnet::NetworkConfig network;
  /// False when no layer sizes were given; train then uses 8-30-<catalog size>.
  bool layers_given = false;

  std::optional<std::string> fixture;
  std::optional<std::filesystem::path> data;
  std::size_t samples = 8;

  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> rules;
  double nn_weight = 1.0;

  report::Format format = report::Format::Text;
  std::optional<std::filesystem::path> out;

  std::optional<std::vector<std::size_t>> pairing;
  std::optional<long long> per_group;
};

/// Merges the config file (if any) and the flags. Throws ConfigError on an
/// unreadable or invalid file, unknown keys or invalid values.
RunConfig resolve_config(const FlagValues& flags);

/// "8,30,8" -> {8, 30, 8}. Throws ConfigError.
std::vector<std::size_t> parse_size_list(const std::string& text);

}  // namespace prefadvisor::cli
