#pragma once

// Evaluation statistics over purchase contingency tables.
//
// All values are computed at full precision; round_half_away() is meant for
// presentation only.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "prefadvisor/contingency_table.hpp"
#include "prefadvisor/matrix.hpp"

namespace prefadvisor::stats {

struct CorrelationResult {
  double r = 0.0;
  std::size_t n = 0;
  double p_two_tailed = 1.0;
};

/// Pearson's r from raw sums, with a two-tailed p-value from
/// t = r * sqrt((n - 2) / (1 - r^2)) on n - 2 degrees of freedom.
///
/// Throws ShapeError on length mismatch, InsufficientDataError when n < 3 and
/// ZeroVarianceError when either vector is constant.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

/// Rounds half away from zero to `decimals` places.
double round_half_away(double value, int decimals = 1);

struct PercentCorrect {
  /// 100 * counts[s][pairing[s]] / column_total(pairing[s]) for each sample s.
  std::vector<double> values;
  double mean = 0.0;
};

/// `pairing[s]` is the group column that sample row s is considered correct for.
PercentCorrect percent_correct(const ContingencyTable& table, std::span<const std::size_t> pairing);

/// Identity pairing sample i <-> group i; needs rows() <= cols().
std::vector<std::size_t> identity_pairing(const ContingencyTable& table);

/// 100 * count / column total. Same shape as the table.
Matrix column_share(const ContingencyTable& table);
/// 100 * count / row total. Same shape as the table.
Matrix row_share(const ContingencyTable& table);

enum class Axis { Rows, Columns };

using CorrelationMatrix = std::vector<std::vector<CorrelationResult>>;

/// Pairwise Pearson over the table's rows or columns. The diagonal is r = 1, p = 0.
CorrelationMatrix correlation_matrix(const ContingencyTable& table, Axis axis);

/// Male vs female sample vectors for teen, young, adult and senior.
/// Expects the 8 columns in group listing order.
std::array<CorrelationResult, 4> gender_age_correlations(const ContingencyTable& table);

/// Per sample row: the four male age counts against the four female ones.
std::vector<CorrelationResult> per_product_gender_correlation(const ContingencyTable& table);

}  // namespace prefadvisor::stats
