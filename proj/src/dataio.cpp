#include "prefadvisor/dataio.hpp"

#include <set>

#include "prefadvisor/error.hpp"
#include "prefadvisor/text.hpp"

namespace prefadvisor::dataio {

namespace {

constexpr std::array<std::string_view, 2> kGenderNames{"male", "female"};
constexpr std::array<std::string_view, 4> kAgeNames{"teen", "young", "adult", "senior"};

std::string capitalized(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

}  // namespace

CustomerGroup CustomerGroup::from_index(std::size_t index) {
  if (index >= kGroupCount) throw InvalidArgument("group index out of range");
  return {static_cast<Gender>(index / 4), static_cast<AgeBand>(index % 4)};
}

std::string CustomerGroup::token() const {
  return std::string(to_string(gender)) + "-" + std::string(to_string(age));
}

std::string CustomerGroup::display_name() const {
  return capitalized(to_string(gender)) + capitalized(to_string(age));
}

std::array<CustomerGroup, kGroupCount> all_groups() {
  std::array<CustomerGroup, kGroupCount> groups;
  for (std::size_t i = 0; i < kGroupCount; ++i) groups[i] = CustomerGroup::from_index(i);
  return groups;
}

std::string_view to_string(Gender gender) { return kGenderNames[static_cast<std::size_t>(gender)]; }
std::string_view to_string(AgeBand age) { return kAgeNames[static_cast<std::size_t>(age)]; }

std::optional<Gender> parse_gender(std::string_view token) {
  const std::string t = text::to_lower(text::trim(token));
  if (t == "male") return Gender::Male;
  if (t == "female") return Gender::Female;
  return std::nullopt;
}

std::optional<AgeBand> parse_age_band(std::string_view token) {
  const std::string t = text::to_lower(text::trim(token));
  if (t == "teen") return AgeBand::Teen;
  if (t == "young") return AgeBand::Young;
  if (t == "adult") return AgeBand::Adult;
  if (t == "senior" || t == "old") return AgeBand::Senior;
  return std::nullopt;
}

std::optional<CustomerGroup> parse_group(std::string_view token) {
  token = text::trim(token);
  const auto sep = token.find_first_of("-_ ");
  if (sep == std::string_view::npos) return std::nullopt;
  const auto gender = parse_gender(token.substr(0, sep));
  const auto age = parse_age_band(token.substr(sep + 1));
  if (!gender || !age) return std::nullopt;
  return CustomerGroup{*gender, *age};
}

SampleCatalog::SampleCatalog(std::vector<std::string> ids, std::vector<std::string> labels)
    : ids_(std::move(ids)), labels_(std::move(labels)) {
  if (ids_.empty()) throw InvalidArgument("sample catalog is empty");
  if (labels_.empty()) labels_ = ids_;
  if (labels_.size() != ids_.size()) throw InvalidArgument("catalog labels do not match ids");
  std::set<std::string> seen;
  for (const std::string& id : ids_) {
    if (id.empty()) throw InvalidArgument("empty sample id");
    if (!seen.insert(text::to_lower(id)).second) {
      throw InvalidArgument("duplicate sample id '" + id + "'");
    }
  }
}

SampleCatalog SampleCatalog::numbered(std::size_t count) {
  std::vector<std::string> ids;
  for (std::size_t k = 1; k <= count; ++k) ids.push_back("S" + std::to_string(k));
  return SampleCatalog(std::move(ids));
}

std::optional<std::size_t> SampleCatalog::find(std::string_view id) const {
  const std::string wanted = text::to_lower(text::trim(id));
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (text::to_lower(ids_[i]) == wanted) return i;
  }
  return std::nullopt;
}

std::vector<double> encode_group(CustomerGroup group) {
  std::vector<double> v(kGroupCount, 0.0);
  v[group.index()] = 1.0;
  return v;
}

std::vector<PurchaseRecord> parse_records(std::string_view csv, const SampleCatalog& catalog) {
  const auto lines = text::split_lines(csv);
  std::vector<PurchaseRecord> records;
  bool have_header = false;

  auto is_header = [](const std::vector<std::string_view>& fields) {
    return fields.size() == 3 && text::to_lower(text::trim(fields[0])) == "gender" &&
           text::to_lower(text::trim(fields[1])) == "age_band" &&
           text::to_lower(text::trim(fields[2])) == "sample";
  };

  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    const std::string_view line = text::trim(lines[n]);
    if (line.empty()) continue;
    const auto fields = text::split(line, ',');
    if (!have_header) {
      if (!is_header(fields)) {
        throw ParseError("expected header 'gender,age_band,sample'", line_no);
      }
      have_header = true;
      continue;
    }
    if (is_header(fields)) throw ParseError("duplicate header row", line_no);
    if (fields.size() != 3) throw ParseError("expected 3 comma-separated fields", line_no);

    const auto gender = parse_gender(fields[0]);
    if (!gender) {
      throw ParseError("unknown gender '" + std::string(text::trim(fields[0])) +
                           "' (valid: " + std::string(kValidGenders) + ")",
                       line_no);
    }
    const auto age = parse_age_band(fields[1]);
    if (!age) {
      throw ParseError("unknown age band '" + std::string(text::trim(fields[1])) +
                           "' (valid: " + std::string(kValidAgeBands) + ")",
                       line_no);
    }
    const auto sample = catalog.find(fields[2]);
    if (!sample) {
      throw ParseError("unknown sample '" + std::string(text::trim(fields[2])) + "'", line_no);
    }
    records.push_back({{*gender, *age}, *sample});
  }

  if (records.empty()) throw EmptyDataError("records file contains no purchase records");
  return records;
}

std::vector<PurchaseRecord> load_records(const std::filesystem::path& path,
                                         const SampleCatalog& catalog) {
  return parse_records(text::read_file(path), catalog);
}

std::string format_records(std::span<const PurchaseRecord> records,
                           const SampleCatalog& catalog) {
  std::string out = "gender,age_band,sample\n";
  for (const PurchaseRecord& r : records) {
    out += std::string(to_string(r.group.gender)) + "," + std::string(to_string(r.group.age)) +
           "," + catalog.id(r.sample) + "\n";
  }
  return out;
}

std::vector<std::string> group_labels() {
  std::vector<std::string> labels;
  for (const CustomerGroup& g : all_groups()) labels.push_back(g.display_name());
  return labels;
}

stats::ContingencyTable tabulate(std::span<const PurchaseRecord> records,
                                 const SampleCatalog& catalog) {
  stats::ContingencyTable table(catalog.ids(), group_labels());
  for (const PurchaseRecord& r : records) {
    if (r.sample >= catalog.size()) throw InvalidArgument("record sample outside catalog");
    ++table.at(r.sample, r.group.index());
  }
  return table;
}

std::vector<PurchaseRecord> expand_counts(const stats::ContingencyTable& table) {
  if (table.cols() != kGroupCount) {
    throw ShapeError("expected " + std::to_string(kGroupCount) + " group columns, got " +
                     std::to_string(table.cols()));
  }
  std::vector<PurchaseRecord> records;
  records.reserve(table.grand_total());
  for (std::size_t s = 0; s < table.rows(); ++s) {
    for (std::size_t g = 0; g < table.cols(); ++g) {
      for (std::uint64_t k = 0; k < table.at(s, g); ++k) {
        records.push_back({CustomerGroup::from_index(g), s});
      }
    }
  }
  return records;
}

std::vector<nnet::TrainingPair> to_training_pairs(std::span<const PurchaseRecord> records,
                                                  const SampleCatalog& catalog) {
  std::vector<nnet::TrainingPair> pairs;
  pairs.reserve(records.size());
  for (const PurchaseRecord& r : records) {
    if (r.sample >= catalog.size()) throw InvalidArgument("record sample outside catalog");
    std::vector<double> target(catalog.size(), 0.0);
    target[r.sample] = 1.0;
    pairs.push_back({encode_group(r.group), std::move(target)});
  }
  return pairs;
}

stats::ContingencyTable table2_fixture() {
  return stats::ContingencyTable(SampleCatalog::numbered(8).ids(), group_labels(),
                                 {
                                     {35, 1, 1, 1, 3, 1, 1, 1},
                                     {6, 25, 1, 1, 3, 14, 1, 1},
                                     {1, 1, 6, 0, 1, 1, 2, 0},
                                     {1, 0, 1, 9, 1, 0, 1, 3},
                                     {3, 1, 1, 0, 55, 1, 4, 0},
                                     {2, 7, 1, 2, 13, 29, 4, 2},
                                     {1, 0, 0, 0, 1, 1, 40, 0},
                                     {1, 1, 1, 3, 1, 0, 2, 7},
                                 });
}

SampleCatalog catalog_for(const stats::ContingencyTable& table) {
  return SampleCatalog(table.row_labels());
}

std::vector<std::size_t> modal_samples(const stats::ContingencyTable& table) {
  std::vector<std::size_t> modes(table.cols(), 0);
  for (std::size_t g = 0; g < table.cols(); ++g) {
    for (std::size_t s = 1; s < table.rows(); ++s) {
      if (table.at(s, g) > table.at(modes[g], g)) modes[g] = s;
    }
  }
  return modes;
}

}  // namespace prefadvisor::dataio
