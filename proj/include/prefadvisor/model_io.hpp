#pragma once

// Versioned text format for trained networks:
//
//   PAMODEL v1
//   layers: 8,30,8
//   learning_rate: 0.2
//   momentum: 0.5
//   use_bias: false
//   w <layer> <to-unit> <from-unit> <value>
//   ...
//
// Values use the shortest decimal that round-trips to the same double.
// Momentum history is not stored; a loaded network starts with zero history.

#include <filesystem>
#include <string>
#include <string_view>

#include "prefadvisor/nnet.hpp"

namespace prefadvisor::nnet {

inline constexpr std::string_view kModelMagic = "PAMODEL";
inline constexpr std::string_view kModelVersion = "v1";

std::string save_model(const Network& net);

/// Throws ParseError (or VersionError) naming the offending line and field.
Network load_model(std::string_view payload);

void save_model_file(const Network& net, const std::filesystem::path& path);
Network load_model_file(const std::filesystem::path& path);

/// Shortest round-trippable decimal representation.
std::string format_double(double value);

}  // namespace prefadvisor::nnet
