// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "prefadvisor/analysis.hpp"
#include "prefadvisor/dataio.hpp"
#include "prefadvisor/error.hpp"
#include "prefadvisor/model_io.hpp"
#include "prefadvisor/nnet.hpp"
#include "prefadvisor/random.hpp"
#include "prefadvisor/stats.hpp"
#include "prefadvisor/text.hpp"

namespace fs = std::filesystem;
using namespace prefadvisor;

namespace {

// Published purchase counts, samples x groups (male teen..senior, female teen..senior).
const std::uint64_t kCounts[8][8] = {
    {35, 1, 1, 1, 3, 1, 1, 1},  {6, 25, 1, 1, 3, 14, 1, 1}, {1, 1, 6, 0, 1, 1, 2, 0},
    {1, 0, 1, 9, 1, 0, 1, 3},   {3, 1, 1, 0, 55, 1, 4, 0},  {2, 7, 1, 2, 13, 29, 4, 2},
    {1, 0, 0, 0, 1, 1, 40, 0},  {1, 1, 1, 3, 1, 0, 2, 7},
};

const double kPercentCorrect[8] = {70.0, 69.4, 50.0, 56.3, 70.5, 61.7, 72.7, 50.0};

// Share of each group's purchases by sample, samples x groups.
const double kColumnShare[8][8] = {
    {70.0, 2.8, 8.3, 6.3, 3.8, 2.1, 1.8, 7.1},   {12.0, 69.4, 8.3, 6.3, 3.8, 29.8, 1.8, 7.1},
    {2.0, 2.8, 50.0, 0.0, 1.3, 2.1, 3.6, 0.0},   {2.0, 0.0, 8.3, 56.3, 1.3, 0.0, 1.8, 21.4},
    {6.0, 2.8, 8.3, 0.0, 70.5, 2.1, 7.3, 0.0},   {4.0, 19.4, 8.3, 12.5, 16.7, 61.7, 7.3, 14.3},
    {2.0, 0.0, 0.0, 0.0, 1.3, 2.1, 72.7, 0.0},   {2.0, 2.8, 8.3, 18.8, 1.3, 0.0, 3.6, 50.0},
};

// Share of each sample's purchases by group, as printed: groups x samples.
const double kRowSharePrinted[8][8] = {
    {79.5, 11.5, 8.3, 6.3, 4.6, 3.3, 2.3, 6.3},  {2.3, 48.1, 8.3, 0.0, 1.5, 11.7, 0.0, 6.3},
    {2.3, 1.9, 50.0, 6.3, 1.5, 11.7, 0.0, 6.3},  {2.3, 1.9, 0.0, 56.3, 0.0, 3.3, 0.0, 18.0},
    {6.8, 5.8, 8.3, 6.3, 84.6, 21.7, 2.3, 6.3},  {2.3, 26.9, 8.3, 0.0, 1.5, 48.3, 2.3, 0.0},
    {2.3, 1.9, 16.7, 6.3, 6.2, 6.7, 93.0, 12.5}, {2.3, 1.9, 0.0, 18.8, 0.0, 3.3, 0.0, 43.8},
};
// The one printed row-share cell that is exempt: (MaleAdult, S6).
constexpr std::size_t kExemptGroup = 2;
constexpr std::size_t kExemptSample = 5;

const double kGenderAge2dp[4] = {-0.11, 0.55, -0.33, 0.52};
const double kGenderAge3dp[4] = {-0.110, 0.548, -0.330, 0.517};
const double kPerProduct[8] = {1.00, 1.00, 0.90, 0.96, 0.94, 0.93, -0.32, 0.96};

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    else if (detail.size() < 400) detail += "; " + why;
    pass = false;
  }
  void require(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

std::string num(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

std::string one_dp(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string cell(std::size_t sample, std::size_t group) {
  return "(" + dataio::CustomerGroup::from_index(group).display_name() + ", S" +
         std::to_string(sample + 1) + ")";
}

// Rounds half away from zero; kept separate from the library's helper.
double round1(double v, int decimals = 1) {
  const double scale = std::pow(10.0, decimals);
  return std::copysign(std::floor(std::abs(v) * scale + 0.5), v) / scale;
}

// P(|T| >= |t|) by Simpson integration of the t density over [0, |t|].
double t_tail_by_quadrature(double t, double dof) {
  const double c = std::exp(std::lgamma((dof + 1) / 2) - std::lgamma(dof / 2)) /
                   std::sqrt(dof * std::numbers::pi);
  auto density = [&](double x) { return c * std::pow(1 + x * x / dof, -(dof + 1) / 2); };
  const int steps = 20000;
  const double h = std::abs(t) / steps;
  double sum = density(0) + density(std::abs(t));
  for (int i = 1; i < steps; ++i) sum += density(i * h) * (i % 2 == 1 ? 4 : 2);
  return 1.0 - 2.0 * sum * h / 3.0;
}

stats::ContingencyTable literal_table() {
  std::vector<std::vector<std::uint64_t>> rows;
  for (const auto& r : kCounts) rows.emplace_back(std::begin(r), std::end(r));
  return stats::ContingencyTable(dataio::SampleCatalog::numbered(8).ids(), dataio::group_labels(),
                                 rows);
}

Outcome fixture_matches_literal() {
  Outcome o;
  o.require(dataio::table2_fixture() == literal_table(), "embedded fixture differs from the printed counts");
  return o;
}

// 1
Outcome percent_correct_reproduction() {
  Outcome o = fixture_matches_literal();
  const auto table = dataio::table2_fixture();
  const auto pc = stats::percent_correct(table, stats::identity_pairing(table));
  for (std::size_t s = 0; s < 8; ++s) {
    const double got = stats::round_half_away(pc.values[s]);
    o.require(got == kPercentCorrect[s], "S" + std::to_string(s + 1) + " " + num(got));
  }
  o.require(stats::round_half_away(pc.mean) == 62.6, "mean " + num(pc.mean));
  return o;
}

// 2
Outcome column_share_reproduction() {
  Outcome o;
  const Matrix share = stats::column_share(dataio::table2_fixture());
  for (std::size_t s = 0; s < 8; ++s) {
    for (std::size_t g = 0; g < 8; ++g) {
      const double got = stats::round_half_away(share(s, g));
      o.require(got == kColumnShare[s][g],
                cell(s, g) + " computed " + one_dp(got) + ", printed " + one_dp(kColumnShare[s][g]));
    }
  }
  return o;
}

// 3
Outcome row_share_reproduction() {
  Outcome o;
  const auto table = dataio::table2_fixture();
  const Matrix share = stats::row_share(table);
  for (std::size_t g = 0; g < 8; ++g) {
    for (std::size_t s = 0; s < 8; ++s) {
      const double got = stats::round_half_away(share(s, g));
      if (g == kExemptGroup && s == kExemptSample) {
        const double oracle = round1(100.0 * kCounts[s][g] / 60.0);
        o.require(got == 1.7 && got == oracle, cell(s, g) + " computed " + one_dp(got) + ", expected 1.7");
        continue;
      }
      o.require(got == kRowSharePrinted[g][s],
                cell(s, g) + " computed " + one_dp(got) + " (" + std::to_string(kCounts[s][g]) + "/" +
                    std::to_string(table.row_total(s)) + "), printed " + one_dp(kRowSharePrinted[g][s]));
    }
  }

  bool flagged = false;
  for (const auto& t : analysis::analyze(table)) {
    for (const auto& note : t.notes) {
      if (note.find("(MaleAdult, S6)") != std::string::npos &&
          note.find("11.7") != std::string::npos) {
        flagged = true;
      }
    }
  }
  o.require(flagged, "report does not flag (MaleAdult, S6)");
  return o;
}

// 4
Outcome gender_age_reproduction() {
  Outcome o;
  const auto r = stats::gender_age_correlations(dataio::table2_fixture());
  for (std::size_t i = 0; i < 4; ++i) {
    o.require(stats::round_half_away(r[i].r, 2) == kGenderAge2dp[i], "2 d.p. r[" + std::to_string(i) + "] " + num(r[i].r));
    o.require(std::abs(r[i].r - kGenderAge3dp[i]) <= 0.0005, "r[" + std::to_string(i) + "] " + num(r[i].r));
  }
  o.require(std::abs(r[0].p_two_tailed - 0.795) <= 0.002, "teen p " + num(r[0].p_two_tailed));
  o.require(std::abs(r[1].p_two_tailed - 0.159) <= 0.002, "young p " + num(r[1].p_two_tailed));
  const double adult_t = r[2].r * std::sqrt(6.0 / (1.0 - r[2].r * r[2].r));
  const double adult_oracle = t_tail_by_quadrature(adult_t, 6.0);
  o.require(std::abs(r[2].p_two_tailed - adult_oracle) <= 0.002,
            "adult p " + num(r[2].p_two_tailed) + " vs quadrature " + num(adult_oracle));
  o.require(std::abs(r[3].p_two_tailed - 0.189) <= 0.002, "senior p " + num(r[3].p_two_tailed));
  return o;
}

// 5
Outcome per_product_reproduction() {
  Outcome o;
  const auto r = stats::per_product_gender_correlation(dataio::table2_fixture());
  for (std::size_t s = 0; s < 8; ++s) {
    o.require(std::abs(r[s].r - kPerProduct[s]) <= 0.01, "S" + std::to_string(s + 1) + " " + num(r[s].r));
  }
  return o;
}

// Independent forward pass for the finite-difference oracle.
double half_sse(const nnet::Network& net, const nnet::TrainingPair& p) {
  std::vector<double> act = p.input;
  for (const Matrix& w : net.weights) {
    std::vector<double> next(w.rows());
    for (std::size_t j = 0; j < w.rows(); ++j) {
      double z = 0.0;
      for (std::size_t i = 0; i < w.cols(); ++i) z += w(j, i) * (i < act.size() ? act[i] : 1.0);
      next[j] = 1.0 / (1.0 + std::exp(-z));
    }
    act = std::move(next);
  }
  double e = 0.0;
  for (std::size_t k = 0; k < act.size(); ++k) e += 0.5 * (p.target[k] - act[k]) * (p.target[k] - act[k]);
  return e;
}

bool oracle_gradient_agrees(const nnet::Network& net, const nnet::TrainingPair& p) {
  const nnet::ForwardTrace trace = nnet::forward(net, p.input);
  const nnet::Deltas deltas = nnet::backpropagate(net, trace, p.target);
  nnet::Network probe = net;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    for (std::size_t j = 0; j < net.weights[l].rows(); ++j) {
      for (std::size_t i = 0; i < net.weights[l].cols(); ++i) {
        const double o_i = i < trace.activations[l].size() ? trace.activations[l][i] : 1.0;
        const double analytic = -deltas[l][j] * o_i;
        const double w = net.weights[l](j, i);
        probe.weights[l](j, i) = w + 1e-5;
        const double plus = half_sse(probe, p);
        probe.weights[l](j, i) = w - 1e-5;
        const double minus = half_sse(probe, p);
        probe.weights[l](j, i) = w;
        const double numeric = (plus - minus) / 2e-5;
        const double diff = std::abs(analytic - numeric);
        if (diff > 1e-8 && diff > 1e-4 * std::max(std::abs(analytic), std::abs(numeric))) return false;
      }
    }
  }
  return true;
}

// 6
Outcome gradient_correctness() {
  Outcome o;
  Rng rng(6006);
  for (int trial = 0; trial < 20; ++trial) {
    nnet::NetworkConfig config;
    config.layer_sizes = {1 + rng.below(5), 1 + rng.below(6), 1 + rng.below(4)};
    config.seed = 60 + trial;
    config.init_half_range = 1.0;
    config.use_bias = trial % 2 == 1;
    const nnet::Network net = nnet::init_weights(config);
    nnet::TrainingPair p;
    for (std::size_t i = 0; i < config.layer_sizes.front(); ++i) p.input.push_back(rng.uniform(-1, 1));
    for (std::size_t k = 0; k < config.layer_sizes.back(); ++k) p.target.push_back(rng.uniform(0, 1));
    o.require(nnet::gradient_check(net, p, 1e-5, 1e-4), "gradient_check failed on trial " + std::to_string(trial));
    o.require(oracle_gradient_agrees(net, p), "independent oracle disagrees on trial " + std::to_string(trial));

    auto corrupted = [](const nnet::Network& n, const nnet::ForwardTrace& t, std::span<const double> target) {
      nnet::Deltas d = nnet::backpropagate(n, t, target);
      for (auto& layer : d) {
        for (double& v : layer) v = -v;
      }
      return d;
    };
    // Corruption is only observable when some gradient is non-negligible.
    if (!nnet::gradient_check(net, p, 1e-5, 1e-4, corrupted)) continue;
    bool all_tiny = true;
    for (const auto& layer : nnet::backpropagate(net, nnet::forward(net, p.input), p.target)) {
      for (double v : layer) all_tiny = all_tiny && std::abs(v) < 1e-8;
    }
    o.require(all_tiny, "sign-corrupted deltas passed on trial " + std::to_string(trial));
  }

  nnet::NetworkConfig control;
  control.layer_sizes = {3, 4, 2};
  control.seed = 5;
  const nnet::Network net = nnet::init_weights(control);
  const nnet::TrainingPair p{{0.4, -0.7, 0.1}, {1.0, 0.0}};
  auto flipped = [](const nnet::Network& n, const nnet::ForwardTrace& t, std::span<const double> target) {
    nnet::Deltas d = nnet::backpropagate(n, t, target);
    for (auto& layer : d) {
      for (double& v : layer) v = -v;
    }
    return d;
  };
  o.require(!nnet::gradient_check(net, p, 1e-5, 1e-4, flipped), "negative control passed");
  return o;
}

// 7
Outcome training_behavior() {
  Outcome o;
  const auto table = dataio::table2_fixture();
  const auto catalog = dataio::catalog_for(table);
  const auto pairs = dataio::to_training_pairs(dataio::expand_counts(table), catalog);
  nnet::NetworkConfig config = nnet::NetworkConfig::eval8();
  config.seed = 7;
  nnet::Network net = nnet::init_weights(config);
  const nnet::TrainReport report = nnet::train(net, pairs);

  o.require(report.epochs_run <= 5000, "ran " + std::to_string(report.epochs_run) + " epochs");
  o.require(std::all_of(report.mse_history.begin(), report.mse_history.end(),
                        [](double m) { return std::isfinite(m); }),
            "non-finite epoch MSE");

  for (std::size_t g = 0; g < 8; ++g) {
    std::size_t mode = 0;
    for (std::size_t s = 1; s < 8; ++s) {
      if (kCounts[s][g] > kCounts[mode][g]) mode = s;
    }
    const auto group = dataio::CustomerGroup::from_index(g);
    const nnet::ForwardTrace trace = nnet::forward(net, dataio::encode_group(group));
    const std::size_t got = nnet::argmax(trace.output());
    o.require(got == mode, group.display_name() + " -> S" + std::to_string(got + 1) + ", modal S" +
                               std::to_string(mode + 1));
  }
  if (o.pass) {
    o.detail = std::to_string(report.epochs_run) + " epochs, final MSE " + num(report.final_mse, 4);
  }
  return o;
}

// 8
Outcome reduction_law() {
  Outcome o;
  Rng rng(808);
  for (int trial = 0; trial < 20; ++trial) {
    nnet::NetworkConfig config;
    config.layer_sizes = {4, 5, 3};
    config.seed = 800 + trial;
    config.momentum = 0.0;
    config.learning_rate = rng.uniform(0.01, 1.0);
    config.use_bias = trial % 2 == 0;
    nnet::Network net = nnet::init_weights(config);
    for (Matrix& m : net.prev_delta_w) {
      for (double& v : m.values()) v = rng.uniform(-1, 1);
    }
    const nnet::Network before = net;
    std::vector<double> input(4), target(3);
    for (double& x : input) x = rng.uniform(-1, 1);
    for (double& x : target) x = rng.uniform(0, 1);
    const nnet::ForwardTrace trace = nnet::forward(net, input);
    const nnet::Deltas deltas = nnet::backpropagate(net, trace, target);
    nnet::update_weights(net, trace, deltas);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      for (std::size_t j = 0; j < net.weights[l].rows(); ++j) {
        for (std::size_t i = 0; i < net.weights[l].cols(); ++i) {
          const double o_i = i < trace.activations[l].size() ? trace.activations[l][i] : 1.0;
          const double plain = before.weights[l](j, i) + config.learning_rate * deltas[l][j] * o_i;
          o.require(net.weights[l](j, i) == plain, "momentum-0 step differs on trial " + std::to_string(trial));
        }
      }
    }

    nnet::NetworkConfig fresh = config;
    fresh.momentum = 0.5;
    nnet::Network still = nnet::init_weights(fresh);
    const nnet::Network original = still;
    nnet::Deltas zero;
    for (const auto& layer : deltas) zero.emplace_back(layer.size(), 0.0);
    nnet::update_weights(still, nnet::forward(still, input), zero);
    o.require(still.weights == original.weights, "zero deltas moved weights on trial " + std::to_string(trial));
  }
  return o;
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "preference-advisor");
  std::istringstream in;
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str() + err.str()};
}

// 9
Outcome determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "prefadvisor_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string a = (dir / "a.pam").string();
  const std::string b = (dir / "b.pam").string();
  const std::vector<std::string> train{"--seed", "7", "train", "--fixture", "table2",
                                       "--preset", "eval8", "--max-epochs", "300"};
  auto with_out = [&](const std::string& path) {
    auto args = train;
    args.insert(args.begin(), {"--out", path});
    return cli_run(args);
  };
  const CliRun ra = with_out(a);
  const CliRun rb = with_out(b);
  o.require(ra.code == 0 && rb.code == 0, "train failed: " + ra.out);
  if (o.pass) {
    o.require(text::read_file(a) == text::read_file(b), "model files differ");
    // Summaries differ only in the trailing "model: <path>" line.
    o.require(ra.out.substr(0, ra.out.find("model:")) == rb.out.substr(0, rb.out.find("model:")),
              "train summaries differ");
  }
  for (const char* format : {"text", "tsv"}) {
    const CliRun x = cli_run({"--format", format, "analyze", "--fixture", "table2"});
    const CliRun y = cli_run({"--format", format, "analyze", "--fixture", "table2"});
    o.require(x.code == 0 && x.out == y.out && !x.out.empty(), std::string(format) + " reports differ");
  }
  fs::remove_all(dir);
  return o;
}

// 10
Outcome round_trip_laws() {
  Outcome o;
  Rng rng(1010);
  for (int trial = 0; trial < 20; ++trial) {
    nnet::NetworkConfig config;
    config.layer_sizes = {8, 1 + rng.below(30), 1 + rng.below(52)};
    config.seed = 1000 + trial;
    config.init_half_range = 4.0;
    config.use_bias = trial % 3 == 0;
    const nnet::Network net = nnet::init_weights(config);
    const nnet::Network back = nnet::load_model(nnet::save_model(net));
    for (int probe = 0; probe < 8; ++probe) {
      std::vector<double> input(8);
      for (double& x : input) x = rng.uniform(-2, 2);
      const nnet::ForwardTrace t1 = nnet::forward(net, input);
      const nnet::ForwardTrace t2 = nnet::forward(back, input);
      o.require(std::ranges::equal(t1.output(), t2.output()), "forward outputs changed on trial " + std::to_string(trial));
    }

    const std::size_t rows = 1 + rng.below(12);
    const auto catalog = dataio::SampleCatalog::numbered(rows);
    stats::ContingencyTable table(catalog.ids(), dataio::group_labels());
    for (std::size_t s = 0; s < rows; ++s) {
      for (std::size_t g = 0; g < 8; ++g) table.at(s, g) = rng.below(15);
    }
    o.require(dataio::tabulate(dataio::expand_counts(table), catalog) == table,
              "tabulate(expand_counts) differs on trial " + std::to_string(trial));
  }
  return o;
}

// 11
Outcome pearson_properties() {
  Outcome o;
  Rng rng(1111);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng.below(40);
    std::vector<double> x(n), y(n);
    for (double& v : x) v = rng.uniform(-10, 10);
    for (double& v : y) v = rng.uniform(-10, 10);
    const auto xy = stats::pearson(x, y);
    const auto yx = stats::pearson(y, x);
    const std::string tag = " (trial " + std::to_string(trial) + ")";
    o.require(xy.r == yx.r && xy.p_two_tailed == yx.p_two_tailed, "symmetry" + tag);

    double a = rng.uniform(0.05, 20.0);
    if (rng.below(2) == 1) a = -a;
    const double b = rng.uniform(-50.0, 50.0);
    std::vector<double> ax(n), ay(n);
    for (std::size_t i = 0; i < n; ++i) {
      ax[i] = a * x[i] + b;
      ay[i] = std::abs(a) * y[i] + b;
    }
    const double sign = a > 0 ? 1.0 : -1.0;
    o.require(std::abs(stats::pearson(x, ax).r - sign) <= 1e-12, "sign(a) law" + tag);
    o.require(std::abs(stats::pearson(ax, y).r - sign * xy.r) <= 1e-9, "affine invariance in x" + tag);
    o.require(std::abs(stats::pearson(x, ay).r - xy.r) <= 1e-9, "affine invariance in y" + tag);

    bool rejected = false;
    try {
      (void)stats::pearson(x, std::vector<double>(n, b));
    } catch (const ZeroVarianceError&) {
      rejected = true;
    }
    o.require(rejected, "constant vector accepted" + tag);
  }
  return o;
}

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;  // 0 when the criterion states no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "percent correct per sample and mean", 1.0, percent_correct_reproduction},
      {2, "share of each group's purchases by sample", 1.0, column_share_reproduction},
      {3, "share of each sample's purchases by group", 1.0, row_share_reproduction},
      {4, "male vs female correlation by age band with significance", 0.0, gender_age_reproduction},
      {5, "male vs female correlation by sample", 0.0, per_product_reproduction},
      {6, "gradient check and negative control", 5.0, gradient_correctness},
      {7, "8-30-8 training learns each group's modal sample", 10.0, training_behavior},
      {8, "momentum-0 reduction and zero-delta law", 0.0, reduction_law},
      {9, "determinism of models and reports", 0.0, determinism},
      {10, "model and table round trips", 0.0, round_trip_laws},
      {11, "Pearson property suite", 0.0, pearson_properties},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.fail(std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds >= c.budget_seconds) {
      outcome.fail("took " + num(seconds, 3) + " s, budget " + num(c.budget_seconds) + " s");
    }
    if (!outcome.pass) ++failures;
    std::printf("%s  %2d  %s  [%.3f s]%s%s\n", outcome.pass ? "PASS" : "FAIL", c.number, c.name,
                seconds, outcome.detail.empty() ? "" : "  ", outcome.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
