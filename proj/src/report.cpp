#include "prefadvisor/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "prefadvisor/stats.hpp"
#include "prefadvisor/text.hpp"

namespace prefadvisor::report {

std::optional<Format> parse_format(std::string_view token) {
  const std::string t = text::to_lower(text::trim(token));
  if (t == "text") return Format::Text;
  if (t == "tsv") return Format::Tsv;
  return std::nullopt;
}

void write_tsv(std::ostream& out, const TextTable& table) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "\t" : "") << cells[i];
    out << '\n';
  };
  out << "# " << table.title << '\n';
  if (!table.header.empty()) line(table.header);
  for (const auto& row : table.rows) line(row);
  for (const auto& note : table.notes) out << "# " << note << '\n';
}

void write_text(std::ostream& out, const TextTable& table) {
  std::vector<std::size_t> widths;
  auto measure = [&](const std::vector<std::string>& cells) {
    if (widths.size() < cells.size()) widths.resize(cells.size(), 0);
    for (std::size_t i = 0; i < cells.size(); ++i) widths[i] = std::max(widths[i], cells[i].size());
  };
  measure(table.header);
  for (const auto& row : table.rows) measure(row);

  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string pad(widths[i] - cells[i].size(), ' ');
      if (i > 0) s += "  ";
      s += i == 0 ? cells[i] + pad : pad + cells[i];
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    out << s << '\n';
  };

  out << table.title << '\n' << std::string(table.title.size(), '=') << '\n';
  if (!table.header.empty()) line(table.header);
  for (const auto& row : table.rows) line(row);
  for (const auto& note : table.notes) out << "Note: " << note << '\n';
  out << '\n';
}

void write(std::ostream& out, const TextTable& table, Format format) {
  if (format == Format::Tsv) {
    write_tsv(out, table);
  } else {
    write_text(out, table);
  }
}

std::string fixed(double value, int decimals) {
  double rounded = stats::round_half_away(value, decimals);
  if (rounded == 0.0) rounded = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
  return buf;
}

}  // namespace prefadvisor::report
