#include "prefadvisor/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prefadvisor/error.hpp"
#include "prefadvisor/special_functions.hpp"

namespace prefadvisor::stats {

namespace {

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

void require_gender_age_layout(const ContingencyTable& table) {
  if (table.cols() != 8) {
    throw ShapeError("expected 8 group columns (4 male then 4 female age bands), got " +
                     std::to_string(table.cols()));
  }
}

}  // namespace

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ShapeError("pearson: lengths differ (" + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  }
  const std::size_t count = x.size();
  if (count < 3) throw InsufficientDataError("pearson: need at least 3 pairs");
  if (is_constant(x) || is_constant(y)) throw ZeroVarianceError("pearson: constant vector");

  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  const double n = static_cast<double>(count);
  const double var_x = n * sxx - sx * sx;
  const double var_y = n * syy - sy * sy;
  if (!(var_x > 0.0) || !(var_y > 0.0)) {
    throw ZeroVarianceError("pearson: variance vanishes numerically");
  }

  CorrelationResult result;
  result.n = count;
  result.r = std::clamp((n * sxy - sx * sy) / (std::sqrt(var_x) * std::sqrt(var_y)), -1.0, 1.0);

  const double dof = n - 2.0;
  const double one_minus_r2 = 1.0 - result.r * result.r;
  if (one_minus_r2 <= 0.0) {
    result.p_two_tailed = 0.0;
  } else {
    const double t = result.r * std::sqrt(dof / one_minus_r2);
    result.p_two_tailed = std::clamp(student_t_two_tailed(t, dof), 0.0, 1.0);
  }
  return result;
}

double round_half_away(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

PercentCorrect percent_correct(const ContingencyTable& table,
                               std::span<const std::size_t> pairing) {
  if (pairing.size() != table.rows()) {
    throw ShapeError("pairing needs one group per sample row");
  }
  PercentCorrect out;
  for (std::size_t s = 0; s < table.rows(); ++s) {
    const std::size_t g = pairing[s];
    if (g >= table.cols()) throw ShapeError("pairing refers to a missing group column");
    const auto total = table.column_total(g);
    if (total == 0) {
      throw DivisionByZeroError("group '" + table.column_labels()[g] + "' has no purchases");
    }
    out.values.push_back(100.0 * static_cast<double>(table.at(s, g)) /
                         static_cast<double>(total));
  }
  double sum = 0.0;
  for (double v : out.values) sum += v;
  out.mean = sum / static_cast<double>(out.values.size());
  return out;
}

std::vector<std::size_t> identity_pairing(const ContingencyTable& table) {
  if (table.rows() > table.cols()) {
    throw ShapeError("identity pairing needs at least as many groups as samples");
  }
  std::vector<std::size_t> pairing(table.rows());
  for (std::size_t s = 0; s < pairing.size(); ++s) pairing[s] = s;
  return pairing;
}

Matrix column_share(const ContingencyTable& table) {
  Matrix out(table.rows(), table.cols());
  for (std::size_t g = 0; g < table.cols(); ++g) {
    const auto total = table.column_total(g);
    if (total == 0) {
      throw DivisionByZeroError("group '" + table.column_labels()[g] + "' has no purchases");
    }
    for (std::size_t s = 0; s < table.rows(); ++s) {
      out(s, g) = 100.0 * static_cast<double>(table.at(s, g)) / static_cast<double>(total);
    }
  }
  return out;
}

Matrix row_share(const ContingencyTable& table) {
  Matrix out(table.rows(), table.cols());
  for (std::size_t s = 0; s < table.rows(); ++s) {
    const auto total = table.row_total(s);
    if (total == 0) {
      throw DivisionByZeroError("sample '" + table.row_labels()[s] + "' has no purchases");
    }
    for (std::size_t g = 0; g < table.cols(); ++g) {
      out(s, g) = 100.0 * static_cast<double>(table.at(s, g)) / static_cast<double>(total);
    }
  }
  return out;
}

CorrelationMatrix correlation_matrix(const ContingencyTable& table, Axis axis) {
  const bool by_column = axis == Axis::Columns;
  const std::size_t count = by_column ? table.cols() : table.rows();
  const auto& labels = by_column ? table.column_labels() : table.row_labels();
  std::vector<std::vector<double>> vectors;
  for (std::size_t i = 0; i < count; ++i) {
    vectors.push_back(by_column ? table.column_vector(i) : table.row_vector(i));
  }

  const std::size_t n = by_column ? table.rows() : table.cols();
  CorrelationMatrix out(count, std::vector<CorrelationResult>(count));
  for (std::size_t a = 0; a < count; ++a) {
    out[a][a] = {1.0, n, 0.0};
    for (std::size_t b = a + 1; b < count; ++b) {
      try {
        out[a][b] = pearson(vectors[a], vectors[b]);
      } catch (const ZeroVarianceError& e) {
        throw ZeroVarianceError("(" + labels[a] + ", " + labels[b] + "): " + e.what());
      } catch (const InsufficientDataError& e) {
        throw InsufficientDataError("(" + labels[a] + ", " + labels[b] + "): " + e.what());
      }
      out[b][a] = out[a][b];
    }
  }
  return out;
}

std::array<CorrelationResult, 4> gender_age_correlations(const ContingencyTable& table) {
  require_gender_age_layout(table);
  std::array<CorrelationResult, 4> out;
  for (std::size_t age = 0; age < 4; ++age) {
    try {
      out[age] = pearson(table.column_vector(age), table.column_vector(age + 4));
    } catch (const ZeroVarianceError& e) {
      throw ZeroVarianceError("(" + table.column_labels()[age] + ", " +
                              table.column_labels()[age + 4] + "): " + e.what());
    }
  }
  return out;
}

std::vector<CorrelationResult> per_product_gender_correlation(const ContingencyTable& table) {
  require_gender_age_layout(table);
  std::vector<CorrelationResult> out;
  for (std::size_t s = 0; s < table.rows(); ++s) {
    const std::vector<double> row = table.row_vector(s);
    const std::span<const double> all(row);
    try {
      out.push_back(pearson(all.first(4), all.last(4)));
    } catch (const ZeroVarianceError& e) {
      throw ZeroVarianceError("sample '" + table.row_labels()[s] + "': " + e.what());
    }
  }
  return out;
}

}  // namespace prefadvisor::stats
