#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace prefadvisor::stats {

/// Purchase counts: rows are product samples, columns are customer groups.
class ContingencyTable {
 public:
  ContingencyTable() = default;
  /// Zero-filled table. Throws ShapeError on empty label lists.
  ContingencyTable(std::vector<std::string> row_labels, std::vector<std::string> column_labels);
  /// Throws ShapeError when the count matrix does not match the labels.
  ContingencyTable(std::vector<std::string> row_labels, std::vector<std::string> column_labels,
                   const std::vector<std::vector<std::uint64_t>>& counts);

  std::size_t rows() const noexcept { return row_labels_.size(); }
  std::size_t cols() const noexcept { return column_labels_.size(); }

  std::uint64_t at(std::size_t row, std::size_t col) const { return counts_[row * cols() + col]; }
  std::uint64_t& at(std::size_t row, std::size_t col) { return counts_[row * cols() + col]; }

  const std::vector<std::string>& row_labels() const noexcept { return row_labels_; }
  const std::vector<std::string>& column_labels() const noexcept { return column_labels_; }

  std::uint64_t row_total(std::size_t row) const;
  std::uint64_t column_total(std::size_t col) const;
  std::uint64_t grand_total() const;

  std::vector<double> row_vector(std::size_t row) const;
  std::vector<double> column_vector(std::size_t col) const;

  friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;

 private:
  std::vector<std::string> row_labels_;
  std::vector<std::string> column_labels_;
  std::vector<std::uint64_t> counts_;
};

}  // namespace prefadvisor::stats
