#include "prefadvisor/model_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "prefadvisor/error.hpp"
#include "prefadvisor/text.hpp"

namespace prefadvisor::nnet {

namespace {

double parse_real(std::string_view token, std::size_t line, std::string_view field) {
  const auto value = text::parse_double(token);
  if (!value || !std::isfinite(*value)) {
    throw ParseError("field '" + std::string(field) + "': invalid number '" +
                         std::string(token) + "'",
                     line);
  }
  return *value;
}

std::size_t parse_index(std::string_view token, std::size_t line, std::string_view field) {
  const auto value = text::parse_size(token);
  if (!value) {
    throw ParseError("field '" + std::string(field) + "': invalid index '" +
                         std::string(token) + "'",
                     line);
  }
  return *value;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

std::string save_model(const Network& net) {
  std::string out;
  out += std::string(kModelMagic) + " " + std::string(kModelVersion) + "\n";
  out += "layers: ";
  for (std::size_t l = 0; l < net.config.layer_sizes.size(); ++l) {
    if (l > 0) out += ",";
    out += std::to_string(net.config.layer_sizes[l]);
  }
  out += "\nlearning_rate: " + format_double(net.config.learning_rate) + "\n";
  out += "momentum: " + format_double(net.config.momentum) + "\n";
  out += std::string("use_bias: ") + (net.config.use_bias ? "true" : "false") + "\n";
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    const Matrix& w = net.weights[l];
    for (std::size_t j = 0; j < w.rows(); ++j) {
      for (std::size_t i = 0; i < w.cols(); ++i) {
        out += "w " + std::to_string(l) + " " + std::to_string(j) + " " + std::to_string(i) +
               " " + format_double(w(j, i)) + "\n";
      }
    }
  }
  return out;
}

Network load_model(std::string_view payload) {
  const std::vector<std::string_view> lines = text::split_lines(payload);
  std::size_t pos = 0;
  auto next_line = [&]() -> std::optional<std::string_view> {
    while (pos < lines.size()) {
      const std::string_view line = text::trim(lines[pos++]);
      if (!line.empty()) return line;
    }
    return std::nullopt;
  };

  const auto header = next_line();
  if (!header) throw ParseError("empty model file");
  const auto header_fields = text::split_whitespace(*header);
  if (header_fields.empty() || header_fields[0] != kModelMagic) {
    throw ParseError("field 'header': expected '" + std::string(kModelMagic) + " " +
                         std::string(kModelVersion) + "'",
                     pos);
  }
  if (header_fields.size() != 2 || header_fields[1] != kModelVersion) {
    throw VersionError("field 'version': unsupported model version '" +
                           (header_fields.size() > 1 ? std::string(header_fields[1]) : "") +
                           "'",
                       pos);
  }

  NetworkConfig config;
  std::optional<std::vector<std::size_t>> layers;
  std::optional<double> learning_rate;
  std::optional<double> momentum;
  std::optional<bool> use_bias;

  std::optional<std::string_view> line;
  while ((line = next_line())) {
    if (line->starts_with("w ")) break;
    const auto colon = line->find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", pos);
    const std::string_view key = text::trim(line->substr(0, colon));
    const std::string_view value = text::trim(line->substr(colon + 1));
    auto reject_duplicate = [&](bool seen) {
      if (seen) throw ParseError("field '" + std::string(key) + "': duplicate key", pos);
    };
    if (key == "layers") {
      reject_duplicate(layers.has_value());
      layers.emplace();
      for (std::string_view part : text::split(value, ',')) {
        const std::size_t size = parse_index(text::trim(part), pos, key);
        if (size == 0) throw ParseError("field 'layers': sizes must be positive", pos);
        layers->push_back(size);
      }
    } else if (key == "learning_rate") {
      reject_duplicate(learning_rate.has_value());
      learning_rate = parse_real(value, pos, key);
    } else if (key == "momentum") {
      reject_duplicate(momentum.has_value());
      momentum = parse_real(value, pos, key);
    } else if (key == "use_bias") {
      reject_duplicate(use_bias.has_value());
      if (value == "true") {
        use_bias = true;
      } else if (value == "false") {
        use_bias = false;
      } else {
        throw ParseError("field 'use_bias': expected true or false", pos);
      }
    } else {
      throw ParseError("field '" + std::string(key) + "': unknown key", pos);
    }
  }

  if (!layers) throw ParseError("field 'layers': missing");
  if (!learning_rate) throw ParseError("field 'learning_rate': missing");
  if (!momentum) throw ParseError("field 'momentum': missing");
  if (!use_bias) throw ParseError("field 'use_bias': missing");
  config.layer_sizes = *layers;
  config.learning_rate = *learning_rate;
  config.momentum = *momentum;
  config.use_bias = *use_bias;
  try {
    config.validate();
  } catch (const ConfigError& e) {
    throw ParseError(std::string("invalid model header: ") + e.what());
  }

  Network net = constant_network(config, 0.0);
  std::vector<std::vector<bool>> seen;
  std::size_t expected = 0;
  for (const Matrix& w : net.weights) {
    seen.emplace_back(w.size(), false);
    expected += w.size();
  }

  std::size_t loaded = 0;
  for (; line; line = next_line()) {
    const auto fields = text::split_whitespace(*line);
    if (fields.size() != 5 || fields[0] != "w") {
      throw ParseError("field 'w': expected 'w <layer> <to> <from> <value>'", pos);
    }
    const std::size_t l = parse_index(fields[1], pos, "w.layer");
    if (l >= net.weights.size()) throw ParseError("field 'w.layer': out of range", pos);
    Matrix& w = net.weights[l];
    const std::size_t j = parse_index(fields[2], pos, "w.to");
    const std::size_t i = parse_index(fields[3], pos, "w.from");
    if (j >= w.rows()) throw ParseError("field 'w.to': out of range", pos);
    if (i >= w.cols()) throw ParseError("field 'w.from': out of range", pos);
    if (seen[l][j * w.cols() + i]) throw ParseError("field 'w': duplicate weight", pos);
    seen[l][j * w.cols() + i] = true;
    w(j, i) = parse_real(fields[4], pos, "w.value");
    ++loaded;
  }

  if (loaded != expected) {
    throw ParseError("field 'w': truncated, expected " + std::to_string(expected) +
                     " weights, found " + std::to_string(loaded));
  }
  return net;
}

void save_model_file(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << save_model(net);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

Network load_model_file(const std::filesystem::path& path) {
  return load_model(text::read_file(path));
}

}  // namespace prefadvisor::nnet
