#pragma once

// Builds the full evaluation report for a purchase table: counts with
// percent-correct, column and row shares, the group correlation matrix and
// the male/female correlations by age band and by sample.

#include <cstddef>
#include <optional>
#include <vector>

#include "prefadvisor/contingency_table.hpp"
#include "prefadvisor/report.hpp"

namespace prefadvisor::analysis {

/// A printed row-share value known to disagree with the arithmetic.
struct PublishedDiscrepancy {
  std::size_t sample = 0;
  std::size_t group = 0;
  double published = 0.0;
  const char* reason = "";
};

/// Row-share cells of the published evaluation table that are misprinted.
std::vector<PublishedDiscrepancy> published_row_share_discrepancies();

struct AnalysisOptions {
  /// Sample -> group pairing for percent-correct; identity when unset.
  std::optional<std::vector<std::size_t>> pairing;
};

/// Throws the stats errors (DivisionByZeroError, ZeroVarianceError, ...) on
/// degenerate tables and EmptyDataError when the table has no purchases.
std::vector<report::TextTable> analyze(const stats::ContingencyTable& table,
                                       const AnalysisOptions& options = {});

}  // namespace prefadvisor::analysis
