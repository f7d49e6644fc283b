#include "prefadvisor/contingency_table.hpp"

#include <numeric>

#include "prefadvisor/error.hpp"

namespace prefadvisor::stats {

ContingencyTable::ContingencyTable(std::vector<std::string> row_labels,
                                   std::vector<std::string> column_labels)
    : row_labels_(std::move(row_labels)), column_labels_(std::move(column_labels)) {
  if (row_labels_.empty() || column_labels_.empty()) {
    throw ShapeError("contingency table needs at least one row and one column");
  }
  counts_.assign(rows() * cols(), 0);
}

ContingencyTable::ContingencyTable(std::vector<std::string> row_labels,
                                   std::vector<std::string> column_labels,
                                   const std::vector<std::vector<std::uint64_t>>& counts)
    : ContingencyTable(std::move(row_labels), std::move(column_labels)) {
  if (counts.size() != rows()) throw ShapeError("count matrix row count does not match labels");
  for (std::size_t r = 0; r < rows(); ++r) {
    if (counts[r].size() != cols()) {
      throw ShapeError("count matrix row " + std::to_string(r) + " has wrong length");
    }
    for (std::size_t c = 0; c < cols(); ++c) at(r, c) = counts[r][c];
  }
}

std::uint64_t ContingencyTable::row_total(std::size_t row) const {
  std::uint64_t sum = 0;
  for (std::size_t c = 0; c < cols(); ++c) sum += at(row, c);
  return sum;
}

std::uint64_t ContingencyTable::column_total(std::size_t col) const {
  std::uint64_t sum = 0;
  for (std::size_t r = 0; r < rows(); ++r) sum += at(r, col);
  return sum;
}

std::uint64_t ContingencyTable::grand_total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::vector<double> ContingencyTable::row_vector(std::size_t row) const {
  std::vector<double> out(cols());
  for (std::size_t c = 0; c < cols(); ++c) out[c] = static_cast<double>(at(row, c));
  return out;
}

std::vector<double> ContingencyTable::column_vector(std::size_t col) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = static_cast<double>(at(r, col));
  return out;
}

}  // namespace prefadvisor::stats
