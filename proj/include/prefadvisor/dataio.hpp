#pragma once

// Customer groups, purchase records and the evaluation fixture.
//
// Records file format (CSV, case-insensitive values):
//   gender,age_band,sample
//   male,teen,S1
//   female,senior,S8
// "old" is accepted as a synonym of "senior"; "senior" is what gets written.

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefadvisor/contingency_table.hpp"
#include "prefadvisor/nnet.hpp"

namespace prefadvisor::dataio {

enum class Gender { Male, Female };
enum class AgeBand { Teen, Young, Adult, Senior };

inline constexpr std::size_t kGroupCount = 8;

struct CustomerGroup {
  Gender gender = Gender::Male;
  AgeBand age = AgeBand::Teen;

  /// Listing order: male teen, young, adult, senior, then the female bands.
  std::size_t index() const noexcept {
    return static_cast<std::size_t>(gender) * 4 + static_cast<std::size_t>(age);
  }
  static CustomerGroup from_index(std::size_t index);

  /// "male-teen", "female-senior", ...
  std::string token() const;
  /// "MaleTeen", "FemaleSenior", ...
  std::string display_name() const;

  friend bool operator==(const CustomerGroup&, const CustomerGroup&) = default;
};

std::array<CustomerGroup, kGroupCount> all_groups();

std::string_view to_string(Gender gender);
std::string_view to_string(AgeBand age);

std::optional<Gender> parse_gender(std::string_view token);
std::optional<AgeBand> parse_age_band(std::string_view token);
/// Accepts "female-adult" (also "female_adult" / "female adult").
std::optional<CustomerGroup> parse_group(std::string_view token);

inline constexpr std::string_view kValidGenders = "male, female";
inline constexpr std::string_view kValidAgeBands = "teen, young, adult, senior (or old)";

/// Ordered product samples with display labels.
class SampleCatalog {
 public:
  /// Throws InvalidArgument on empty or duplicate ids.
  explicit SampleCatalog(std::vector<std::string> ids, std::vector<std::string> labels = {});

  /// S1..Sm.
  static SampleCatalog numbered(std::size_t count);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::string& id(std::size_t index) const { return ids_.at(index); }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  /// Case-insensitive lookup.
  std::optional<std::size_t> find(std::string_view id) const;

 private:
  std::vector<std::string> ids_;
  std::vector<std::string> labels_;
};

struct PurchaseRecord {
  CustomerGroup group;
  /// Index into the catalog.
  std::size_t sample = 0;

  friend bool operator==(const PurchaseRecord&, const PurchaseRecord&) = default;
};

/// One-hot vector of length 8 with 1.0 at group.index().
std::vector<double> encode_group(CustomerGroup group);

std::vector<PurchaseRecord> parse_records(std::string_view csv, const SampleCatalog& catalog);
std::vector<PurchaseRecord> load_records(const std::filesystem::path& path,
                                         const SampleCatalog& catalog);
std::string format_records(std::span<const PurchaseRecord> records, const SampleCatalog& catalog);

/// Column labels of a samples x groups table, in listing order.
std::vector<std::string> group_labels();

stats::ContingencyTable tabulate(std::span<const PurchaseRecord> records,
                                 const SampleCatalog& catalog);

/// counts[s][g] copies of (g, s), row-major. The table must have 8 columns.
std::vector<PurchaseRecord> expand_counts(const stats::ContingencyTable& table);

std::vector<nnet::TrainingPair> to_training_pairs(std::span<const PurchaseRecord> records,
                                                  const SampleCatalog& catalog);

/// The published 8 x 8 purchase counts (308 records).
stats::ContingencyTable table2_fixture();
SampleCatalog catalog_for(const stats::ContingencyTable& table);

/// Index of the largest count in each group's column; ties go to the lower row.
std::vector<std::size_t> modal_samples(const stats::ContingencyTable& table);

}  // namespace prefadvisor::dataio
