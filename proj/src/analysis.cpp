#include "prefadvisor/analysis.hpp"

#include <string>

#include "prefadvisor/dataio.hpp"
#include "prefadvisor/error.hpp"
#include "prefadvisor/stats.hpp"

namespace prefadvisor::analysis {

namespace {

using report::fixed;
using report::TextTable;
using stats::ContingencyTable;

TextTable counts_table(const ContingencyTable& table) {
  TextTable t;
  t.title = "Purchase counts";
  t.header.push_back("Sample");
  for (const auto& label : table.column_labels()) t.header.push_back(label);
  t.header.push_back("Total");
  for (std::size_t s = 0; s < table.rows(); ++s) {
    std::vector<std::string> row{table.row_labels()[s]};
    for (std::size_t g = 0; g < table.cols(); ++g) row.push_back(std::to_string(table.at(s, g)));
    row.push_back(std::to_string(table.row_total(s)));
    t.rows.push_back(std::move(row));
  }
  std::vector<std::string> totals{"Total"};
  for (std::size_t g = 0; g < table.cols(); ++g) {
    totals.push_back(std::to_string(table.column_total(g)));
  }
  totals.push_back(std::to_string(table.grand_total()));
  t.rows.push_back(std::move(totals));
  return t;
}

TextTable percent_correct_table(const ContingencyTable& table,
                                const std::vector<std::size_t>& pairing) {
  const stats::PercentCorrect pc = stats::percent_correct(table, pairing);
  TextTable t;
  t.title = "Percent correct";
  t.header = {"Sample", "Group", "% Correct"};
  for (std::size_t s = 0; s < table.rows(); ++s) {
    t.rows.push_back({table.row_labels()[s], table.column_labels()[pairing[s]],
                      fixed(pc.values[s], 1)});
  }
  t.rows.push_back({"Average", "", fixed(pc.mean, 1)});
  return t;
}

TextTable column_share_table(const ContingencyTable& table) {
  const Matrix share = stats::column_share(table);
  TextTable t;
  t.title = "Share of each group's purchases by sample (%)";
  t.header.push_back("Sample");
  for (const auto& label : table.column_labels()) t.header.push_back(label);
  std::vector<double> sums(table.cols(), 0.0);
  for (std::size_t s = 0; s < table.rows(); ++s) {
    std::vector<std::string> row{table.row_labels()[s]};
    for (std::size_t g = 0; g < table.cols(); ++g) {
      row.push_back(fixed(share(s, g), 1));
      sums[g] += share(s, g);
    }
    t.rows.push_back(std::move(row));
  }
  std::vector<std::string> total{"%"};
  for (double v : sums) total.push_back(fixed(v, 1));
  t.rows.push_back(std::move(total));
  return t;
}

TextTable row_share_table(const ContingencyTable& table, bool flag_published) {
  const Matrix share = stats::row_share(table);
  TextTable t;
  t.title = "Share of each sample's purchases by group (%)";
  t.header.push_back("Group");
  for (const auto& label : table.row_labels()) t.header.push_back(label);
  std::vector<double> sums(table.rows(), 0.0);
  for (std::size_t g = 0; g < table.cols(); ++g) {
    std::vector<std::string> row{table.column_labels()[g]};
    for (std::size_t s = 0; s < table.rows(); ++s) {
      row.push_back(fixed(share(s, g), 1));
      sums[s] += share(s, g);
    }
    t.rows.push_back(std::move(row));
  }
  std::vector<std::string> total{"%"};
  for (double v : sums) total.push_back(fixed(v, 1));
  t.rows.push_back(std::move(total));

  if (flag_published) {
    for (const PublishedDiscrepancy& d : published_row_share_discrepancies()) {
      t.notes.push_back("known discrepancy at (" + table.column_labels()[d.group] + ", " +
                        table.row_labels()[d.sample] + "): computed " +
                        fixed(share(d.sample, d.group), 1) + ", published " +
                        fixed(d.published, 1) + "; " + d.reason);
    }
  }
  return t;
}

std::vector<TextTable> correlation_matrix_tables(const ContingencyTable& table) {
  const stats::CorrelationMatrix m = stats::correlation_matrix(table, stats::Axis::Columns);
  TextTable r_table;
  r_table.title = "Group correlation matrix: Pearson r";
  TextTable p_table;
  p_table.title = "Group correlation matrix: Sig. (2-tailed)";
  for (TextTable* t : {&r_table, &p_table}) {
    t->header.push_back("");
    for (const auto& label : table.column_labels()) t->header.push_back(label);
  }
  for (std::size_t a = 0; a < m.size(); ++a) {
    std::vector<std::string> r_row{table.column_labels()[a]};
    std::vector<std::string> p_row{table.column_labels()[a]};
    for (std::size_t b = 0; b < m.size(); ++b) {
      r_row.push_back(a == b ? "1" : fixed(m[a][b].r, 3));
      p_row.push_back(a == b ? "." : fixed(m[a][b].p_two_tailed, 3));
    }
    r_table.rows.push_back(std::move(r_row));
    p_table.rows.push_back(std::move(p_row));
  }
  r_table.notes.push_back("N = " + std::to_string(table.rows()) + " for every pair");
  return {r_table, p_table};
}

TextTable gender_age_table(const ContingencyTable& table) {
  const auto results = stats::gender_age_correlations(table);
  TextTable t;
  t.title = "Male vs female correlation by age band";
  t.header = {"", "Teen", "Young", "Adult", "Senior"};
  std::vector<std::string> r2{"r"}, r3{"r (3 d.p.)"}, p{"Sig. (2-tailed)"}, n{"N"};
  for (const auto& c : results) {
    r2.push_back(fixed(c.r, 2));
    r3.push_back(fixed(c.r, 3));
    p.push_back(fixed(c.p_two_tailed, 3));
    n.push_back(std::to_string(c.n));
  }
  t.rows = {r2, r3, p, n};
  return t;
}

TextTable per_product_table(const ContingencyTable& table) {
  const auto results = stats::per_product_gender_correlation(table);
  TextTable t;
  t.title = "Male vs female correlation by sample";
  t.header = {"Sample", "r", "Sig. (2-tailed)", "N"};
  for (std::size_t s = 0; s < results.size(); ++s) {
    t.rows.push_back({table.row_labels()[s], fixed(results[s].r, 2),
                      fixed(results[s].p_two_tailed, 3), std::to_string(results[s].n)});
  }
  return t;
}

}  // namespace

std::vector<PublishedDiscrepancy> published_row_share_discrepancies() {
  return {
      {5, 2, 11.7, "1/60 = 1.7%; the published S6 column sums to 110"},
      {7, 3, 18.0, "3/16 = 18.75%; the same ratio is published as 18.8 at (FemaleSenior, S4)"},
  };
}

std::vector<TextTable> analyze(const ContingencyTable& table, const AnalysisOptions& options) {
  if (table.grand_total() == 0) throw EmptyDataError("table has no purchases");

  std::vector<TextTable> out;
  out.push_back(counts_table(table));

  if (options.pairing) {
    out.push_back(percent_correct_table(table, *options.pairing));
  } else if (table.rows() <= table.cols()) {
    out.push_back(percent_correct_table(table, stats::identity_pairing(table)));
  }

  out.push_back(column_share_table(table));
  out.push_back(row_share_table(table, table == dataio::table2_fixture()));
  for (TextTable& t : correlation_matrix_tables(table)) out.push_back(std::move(t));
  if (table.cols() == dataio::kGroupCount) {
    out.push_back(gender_age_table(table));
    out.push_back(per_product_table(table));
  }
  return out;
}

}  // namespace prefadvisor::analysis
