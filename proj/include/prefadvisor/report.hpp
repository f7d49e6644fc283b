#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace prefadvisor::report {

enum class Format { Text, Tsv };

std::optional<Format> parse_format(std::string_view token);

/// A titled grid of preformatted cells plus free-form notes.
struct TextTable {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;
};

/// Tab-separated: "# title", header line, data lines, "# note" lines.
void write_tsv(std::ostream& out, const TextTable& table);

/// Columns padded to the widest cell; first column left-aligned, the rest right-aligned.
void write_text(std::ostream& out, const TextTable& table);

void write(std::ostream& out, const TextTable& table, Format format);

/// Fixed-point with `decimals` places after rounding half away from zero;
/// negative zero prints as zero.
std::string fixed(double value, int decimals);

}  // namespace prefadvisor::report
