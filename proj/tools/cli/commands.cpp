#include "commands.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "prefadvisor/analysis.hpp"
#include "prefadvisor/dataio.hpp"
#include "prefadvisor/error.hpp"
#include "prefadvisor/expert.hpp"
#include "prefadvisor/model_io.hpp"
#include "prefadvisor/random.hpp"
#include "prefadvisor/text.hpp"
#include "run_config.hpp"

namespace prefadvisor::cli {

namespace {

constexpr const char* kDefaultModelPath = "model.pam";

struct DataSource {
  stats::ContingencyTable table;
  dataio::SampleCatalog catalog;
  std::vector<dataio::PurchaseRecord> records;
};

DataSource load_data(const RunConfig& cfg) {
  if (cfg.fixture) {
    stats::ContingencyTable table = dataio::table2_fixture();
    auto records = dataio::expand_counts(table);
    return {table, dataio::catalog_for(table), std::move(records)};
  }
  if (cfg.data) {
    dataio::SampleCatalog catalog = dataio::SampleCatalog::numbered(cfg.samples);
    auto records = dataio::load_records(*cfg.data, catalog);
    auto table = dataio::tabulate(records, catalog);
    return {std::move(table), std::move(catalog), std::move(records)};
  }
  throw ConfigError("no data source; use --fixture table2 or --data <records.csv>");
}

// Writes `body` to --out when given, otherwise to `out`.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& body) {
  if (!cfg.out) {
    out << body;
    return;
  }
  std::ofstream file(*cfg.out, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + cfg.out->string() + "'");
  file << body;
}

nnet::Network load_model_or_config_error(const RunConfig& cfg) {
  if (!cfg.model) throw ConfigError("no model; pass --model <path>");
  try {
    return nnet::load_model_file(*cfg.model);
  } catch (const DataError& e) {
    throw ConfigError("cannot load model '" + cfg.model->string() + "': " + e.what());
  }
}

int cmd_train(const RunConfig& base, bool require_converged, std::ostream& out) {
  RunConfig cfg = base;
  const DataSource data = load_data(cfg);
  if (!cfg.layers_given) cfg.network.layer_sizes = {dataio::kGroupCount, 30, data.catalog.size()};
  if (cfg.network.layer_sizes.front() != dataio::kGroupCount) {
    throw ConfigError("the input layer must have " + std::to_string(dataio::kGroupCount) +
                      " units");
  }
  if (cfg.network.layer_sizes.back() != data.catalog.size()) {
    throw ConfigError("the output layer has " + std::to_string(cfg.network.layer_sizes.back()) +
                      " units but the data has " + std::to_string(data.catalog.size()) +
                      " samples");
  }

  const auto pairs = dataio::to_training_pairs(data.records, data.catalog);
  nnet::Network net = nnet::init_weights(cfg.network);
  const nnet::TrainReport report = nnet::train(net, pairs);

  const std::filesystem::path path = cfg.out.value_or(kDefaultModelPath);
  nnet::save_model_file(net, path);

  out << "records: " << pairs.size() << '\n'
      << "layers: ";
  for (std::size_t l = 0; l < cfg.network.layer_sizes.size(); ++l) {
    out << (l ? "," : "") << cfg.network.layer_sizes[l];
  }
  out << '\n'
      << "epochs: " << report.epochs_run << '\n'
      << "final_mse: " << nnet::format_double(report.final_mse) << '\n'
      << "converged: " << (report.converged ? "true" : "false") << '\n'
      << "model: " << path.string() << '\n';

  if (require_converged && !report.converged) return kExitQualityGate;
  return kExitOk;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  const DataSource data = load_data(cfg);
  if (cfg.pairing) {
    if (cfg.pairing->size() != data.table.rows()) {
      throw ConfigError("--pairing needs one group index per sample (" +
                        std::to_string(data.table.rows()) + ")");
    }
    for (std::size_t g : *cfg.pairing) {
      if (g >= data.table.cols()) {
        throw ConfigError("--pairing group index " + std::to_string(g) + " is out of range");
      }
    }
  }
  analysis::AnalysisOptions options;
  options.pairing = cfg.pairing;
  std::ostringstream body;
  for (const auto& table : analysis::analyze(data.table, options)) {
    report::write(body, table, cfg.format);
  }
  emit(cfg, out, body.str());
  return kExitOk;
}

dataio::CustomerGroup parse_group_or_usage(const std::string& gender_token,
                                           const std::string& age_token) {
  const auto gender = dataio::parse_gender(gender_token);
  if (!gender) {
    throw ConfigError("unknown gender '" + gender_token + "' (valid: " +
                      std::string(dataio::kValidGenders) + ")");
  }
  const auto age = dataio::parse_age_band(age_token);
  if (!age) {
    throw ConfigError("unknown age band '" + age_token + "' (valid: " +
                      std::string(dataio::kValidAgeBands) + ")");
  }
  return {*gender, *age};
}

report::TextTable recommendation_table(const expert::Recommendation& rec,
                                       dataio::CustomerGroup group) {
  report::TextTable t;
  t.title = "Recommendation for " + group.token();
  t.header = {"Rank", "Sample", "Blended", "Network", "Rules"};
  for (std::size_t k = 0; k < rec.entries.size(); ++k) {
    const auto& e = rec.entries[k];
    t.rows.push_back({std::to_string(k + 1), e.sample_id, report::fixed(e.blended, 6),
                      report::fixed(e.nn_score, 6), report::fixed(e.rule_adjust, 6)});
  }
  for (const std::string& line : rec.inference.log) t.notes.push_back(line);
  return t;
}

int cmd_recommend(const RunConfig& cfg, const std::vector<std::string>& group_tokens,
                  bool interactive, std::istream& in, std::ostream& out, std::ostream& err) {
  const nnet::Network net = load_model_or_config_error(cfg);
  const auto catalog = dataio::SampleCatalog::numbered(net.output_size());
  expert::KnowledgeBase kb;
  if (cfg.rules) {
    try {
      kb = expert::KnowledgeBase::load(*cfg.rules, catalog);
    } catch (const DataError& e) {
      throw ConfigError("cannot load rules '" + cfg.rules->string() + "': " + e.what());
    }
  }

  auto consult = [&](dataio::CustomerGroup group, std::ostream& sink) {
    const auto rec = expert::recommend(net, kb.rules(), catalog, group, cfg.nn_weight);
    report::write(sink, recommendation_table(rec, group), cfg.format);
  };

  if (!interactive) {
    if (group_tokens.size() != 2) {
      throw ConfigError("recommend needs <gender> <age_band>, or --interactive");
    }
    std::ostringstream body;
    consult(parse_group_or_usage(group_tokens[0], group_tokens[1]), body);
    emit(cfg, out, body.str());
    return kExitOk;
  }

  std::string line;
  while (true) {
    out << "group (gender age_band)> " << std::flush;
    if (!std::getline(in, line)) break;
    const auto tokens = text::split_whitespace(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "quit" || tokens[0] == "exit") break;
    std::optional<dataio::CustomerGroup> group;
    if (tokens.size() == 1) {
      group = dataio::parse_group(tokens[0]);
    } else if (tokens.size() == 2) {
      const auto g = dataio::parse_gender(tokens[0]);
      const auto a = dataio::parse_age_band(tokens[1]);
      if (g && a) group = dataio::CustomerGroup{*g, *a};
    }
    if (!group) {
      err << "unrecognized group '" << text::trim(line) << "' (genders: " << dataio::kValidGenders
          << "; age bands: " << dataio::kValidAgeBands << ")\n";
      continue;
    }
    out << '\n';
    consult(*group, out);
  }
  out << '\n';
  return kExitOk;
}

int cmd_gen(const RunConfig& cfg, bool synthetic, std::ostream& out) {
  if (!synthetic) {
    const DataSource data = load_data(cfg);
    emit(cfg, out, dataio::format_records(dataio::expand_counts(data.table), data.catalog));
    return kExitOk;
  }

  if (!cfg.per_group) throw ConfigError("--synthetic needs --per-group <count>");
  if (*cfg.per_group <= 0) throw ConfigError("--per-group must be positive");
  const DataSource data = load_data(cfg);
  const stats::ContingencyTable& table = data.table;

  Rng rng(cfg.network.seed);
  std::vector<dataio::PurchaseRecord> records;
  for (std::size_t g = 0; g < table.cols(); ++g) {
    const auto total = table.column_total(g);
    if (total == 0) {
      throw DataError("group '" + table.column_labels()[g] + "' has no purchases to sample from");
    }
    for (long long k = 0; k < *cfg.per_group; ++k) {
      // Inverse-CDF draw over the group's column counts.
      auto ticket = static_cast<std::uint64_t>(rng.below(total));
      std::size_t s = 0;
      while (ticket >= table.at(s, g)) ticket -= table.at(s++, g);
      records.push_back({dataio::CustomerGroup::from_index(g), s});
    }
  }
  emit(cfg, out, dataio::format_records(records, data.catalog));
  return kExitOk;
}

// Maps library errors onto exit codes.
int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "Recommends product samples per customer group from a trained network and a rule base,\n"
      "and reproduces the evaluation statistics of a purchase table.\n\n"
      "Settings precedence: built-in defaults < config file (--config or PREFADVISOR_CONFIG,\n"
      "a JSON object keyed like the long flags with '_' for '-') < command-line flags.",
      "preference-advisor"};
  app.fallthrough();
  app.require_subcommand(1);

  FlagValues flags;
  app.add_option("--config", flags.config, "JSON config file");
  app.add_option("--seed", flags.seed, "Seed for weight init, shuffling and sampling");
  app.add_option("--format", flags.format, "Report format: text or tsv");
  app.add_option("--out", flags.out, "Output path (model file for train)");

  auto add_data_options = [&](CLI::App* cmd) {
    cmd->add_option("--fixture", flags.fixture, "Built-in table (table2)");
    cmd->add_option("--data", flags.data, "Records CSV (gender,age_band,sample)");
    cmd->add_option("--samples", flags.samples, "Catalog size for --data (S1..Sn), default 8");
  };

  CLI::App* train = app.add_subcommand("train", "Train a network on purchase records");
  add_data_options(train);
  train->add_option("--preset", flags.preset, "paper52 (8-30-52) or eval8 (8-30-8)");
  train->add_option("--layers", flags.layers, "Comma-separated layer sizes");
  train->add_option("--learning-rate", flags.learning_rate, "Default 0.2");
  train->add_option("--momentum", flags.momentum, "Default 0.5");
  train->add_option("--max-epochs", flags.max_epochs, "Default 5000");
  train->add_option("--target-mse", flags.target_mse, "Default 0.01");
  train->add_option("--init-half-range", flags.init_half_range, "Default 0.5");
  bool use_bias = false;
  bool require_converged = false;
  train->add_flag("--bias", use_bias, "Add a constant-1 input to every layer");
  train->add_flag("--require-converged", require_converged,
                  "Exit 4 when the target MSE is not reached");

  CLI::App* analyze = app.add_subcommand("analyze", "Print the evaluation report for a table");
  add_data_options(analyze);
  analyze->add_option("--pairing", flags.pairing,
                      "Group index per sample for percent-correct (default identity)");

  CLI::App* recommend = app.add_subcommand("recommend", "Rank samples for a customer group");
  std::vector<std::string> group_tokens;
  bool interactive = false;
  recommend->add_option("group", group_tokens, "<gender> <age_band>")->expected(0, 2);
  recommend->add_option("--model", flags.model, "Model file");
  recommend->add_option("--rules", flags.rules, "Rule file");
  recommend->add_option("--nn-weight", flags.nn_weight, "Weight of the network score, default 1");
  recommend->add_flag("--interactive", interactive, "Prompt for groups until end of input");

  CLI::App* gen = app.add_subcommand("gen", "Write a records CSV");
  add_data_options(gen);
  bool synthetic = false;
  gen->add_flag("--synthetic", synthetic, "Sample records from the table's group distributions");
  gen->add_option("--per-group", flags.per_group, "Records per group in synthetic mode");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (train->count("--bias") > 0) flags.use_bias = use_bias;

  return guarded(
      [&]() -> int {
        const RunConfig cfg = resolve_config(flags);
        if (train->parsed()) return cmd_train(cfg, require_converged, out);
        if (analyze->parsed()) return cmd_analyze(cfg, out);
        if (recommend->parsed()) {
          return cmd_recommend(cfg, group_tokens, interactive, in, out, err);
        }
        return cmd_gen(cfg, synthetic, out);
      },
      err);
}

}  // namespace prefadvisor::cli
