#include "run_config.hpp"

#include <cstdlib>
#include <set>

#include <json.hpp>

#include "prefadvisor/error.hpp"
#include "prefadvisor/text.hpp"

namespace prefadvisor::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kFileKeys{
    "seed",        "format",   "out",          "fixture",         "data",
    "samples",     "preset",   "layers",       "learning_rate",   "momentum",
    "max_epochs",  "target_mse", "init_half_range", "use_bias",   "model",
    "rules",       "nn_weight", "pairing",     "per_group",
};

json read_config_file(const std::string& path) {
  std::string contents;
  try {
    contents = text::read_file(path);
  } catch (const DataError&) {
    throw ConfigError("cannot read config file '" + path + "'");
  }
  json doc;
  try {
    doc = json::parse(contents);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kFileKeys.contains(key)) throw ConfigError("config file: unknown key '" + key + "'");
  }
  return doc;
}

// Reads `key` from the file into a FlagValues-style optional unless the flag
// already set it.
template <typename T>
void fill_from(const json& doc, const char* key, std::optional<T>& slot) {
  if (slot || !doc.contains(key)) return;
  try {
    slot = doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config file: invalid value for '") + key + "'");
  }
}

std::vector<std::size_t> preset_layers(const std::string& name) {
  if (name == "paper52") return nnet::NetworkConfig::paper52().layer_sizes;
  if (name == "eval8") return nnet::NetworkConfig::eval8().layer_sizes;
  throw ConfigError("unknown preset '" + name + "' (valid: paper52, eval8)");
}

}  // namespace

std::vector<std::size_t> parse_size_list(const std::string& list) {
  std::vector<std::size_t> out;
  for (std::string_view part : text::split(list, ',')) {
    const auto value = text::parse_size(part);
    if (!value) throw ConfigError("invalid list entry '" + std::string(part) + "' in '" + list + "'");
    out.push_back(*value);
  }
  return out;
}

RunConfig resolve_config(const FlagValues& given) {
  FlagValues flags = given;

  std::optional<std::string> config_path = flags.config;
  if (!config_path) {
    if (const char* env = std::getenv("PREFADVISOR_CONFIG"); env && *env) config_path = env;
  }

  // Layer sizes: --layers > --preset > file layers > file preset.
  std::optional<std::vector<std::size_t>> layers;
  if (flags.layers) {
    layers = parse_size_list(*flags.layers);
  } else if (flags.preset) {
    layers = preset_layers(*flags.preset);
  }

  if (config_path) {
    const json doc = read_config_file(*config_path);
    fill_from(doc, "seed", flags.seed);
    fill_from(doc, "format", flags.format);
    fill_from(doc, "out", flags.out);
    fill_from(doc, "fixture", flags.fixture);
    fill_from(doc, "data", flags.data);
    fill_from(doc, "samples", flags.samples);
    fill_from(doc, "learning_rate", flags.learning_rate);
    fill_from(doc, "momentum", flags.momentum);
    fill_from(doc, "max_epochs", flags.max_epochs);
    fill_from(doc, "target_mse", flags.target_mse);
    fill_from(doc, "init_half_range", flags.init_half_range);
    fill_from(doc, "use_bias", flags.use_bias);
    fill_from(doc, "model", flags.model);
    fill_from(doc, "rules", flags.rules);
    fill_from(doc, "nn_weight", flags.nn_weight);
    fill_from(doc, "per_group", flags.per_group);
    if (!flags.pairing && doc.contains("pairing")) {
      std::optional<std::vector<std::size_t>> pairing;
      fill_from(doc, "pairing", pairing);
      std::string joined;
      for (std::size_t g : *pairing) joined += (joined.empty() ? "" : ",") + std::to_string(g);
      flags.pairing = joined;
    }
    if (!layers) {
      std::optional<std::vector<std::size_t>> file_layers;
      std::optional<std::string> file_preset;
      fill_from(doc, "layers", file_layers);
      fill_from(doc, "preset", file_preset);
      if (file_layers) {
        layers = file_layers;
      } else if (file_preset) {
        layers = preset_layers(*file_preset);
      }
    }
  }

  RunConfig cfg;
  if (layers) {
    cfg.network.layer_sizes = *layers;
    cfg.layers_given = true;
  }
  if (flags.seed) cfg.network.seed = *flags.seed;
  if (flags.learning_rate) cfg.network.learning_rate = *flags.learning_rate;
  if (flags.momentum) cfg.network.momentum = *flags.momentum;
  if (flags.max_epochs) cfg.network.max_epochs = *flags.max_epochs;
  if (flags.target_mse) cfg.network.target_mse = *flags.target_mse;
  if (flags.init_half_range) cfg.network.init_half_range = *flags.init_half_range;
  if (flags.use_bias) cfg.network.use_bias = *flags.use_bias;
  cfg.network.validate();

  if (flags.format) {
    const auto format = report::parse_format(*flags.format);
    if (!format) throw ConfigError("unknown format '" + *flags.format + "' (valid: text, tsv)");
    cfg.format = *format;
  }
  if (flags.out) cfg.out = *flags.out;
  if (flags.fixture) {
    if (*flags.fixture != "table2") {
      throw ConfigError("unknown fixture '" + *flags.fixture + "' (valid: table2)");
    }
    cfg.fixture = *flags.fixture;
  }
  if (flags.data) cfg.data = *flags.data;
  if (cfg.fixture && cfg.data) throw ConfigError("give either a fixture or a data file, not both");
  if (flags.samples) {
    if (*flags.samples == 0) throw ConfigError("samples must be positive");
    cfg.samples = *flags.samples;
  }
  if (flags.model) cfg.model = *flags.model;
  if (flags.rules) cfg.rules = *flags.rules;
  if (flags.nn_weight) cfg.nn_weight = *flags.nn_weight;
  if (flags.pairing) cfg.pairing = parse_size_list(*flags.pairing);
  cfg.per_group = flags.per_group;
  return cfg;
}

}  // namespace prefadvisor::cli
