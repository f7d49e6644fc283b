#pragma once

// Rule-based consultation shell.
//
// A knowledge base of if-then rules is forward-chained over a working memory
// of facts. Rules may assert facts or adjust the score of a product sample;
// the adjustments are added to the network's output scores to rank samples
// for a customer group.

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "prefadvisor/dataio.hpp"
#include "prefadvisor/nnet.hpp"

namespace prefadvisor::expert {

using FactValue = std::variant<std::string, double>;

std::string to_string(const FactValue& value);

/// Numeric when the token parses as a number, otherwise a string.
FactValue parse_fact_value(std::string_view token);

struct Fact {
  std::string key;
  FactValue value;
};

enum class Comparator { Equal, NotEqual, Less, LessEqual, Greater, GreaterEqual };

std::string_view to_string(Comparator op);

struct Condition {
  std::string key;
  Comparator op = Comparator::Equal;
  FactValue value;
};

struct AssertFact {
  std::string key;
  FactValue value;
};

struct AdjustScore {
  std::string sample;
  double delta = 0.0;
};

using Action = std::variant<AssertFact, AdjustScore>;

struct Rule {
  std::string id;
  std::vector<Condition> conditions;
  std::vector<Action> actions;
  int salience = 0;
};

/// Working memory; keys are unique.
using FactBase = std::map<std::string, FactValue>;

struct InferenceResult {
  FactBase facts;
  /// Rule ids in firing order.
  std::vector<std::string> fired;
  /// One line per firing, assertion and adjustment, including overwrites.
  std::vector<std::string> log;
  /// Summed AdjustScore deltas keyed by sample id as written in the rules.
  std::map<std::string, double> adjustments;
};

/// Structural checks: unique nonempty ids, nonempty conditions, ordering
/// comparators only against numbers. With a catalog, also checks that every
/// boosted sample exists. Throws RuleValidationError.
void validate_rules(std::span<const Rule> rules, const dataio::SampleCatalog* catalog = nullptr);

/// Whether a condition holds against the working memory. Missing facts never
/// match; string comparisons ignore ASCII case.
bool holds(const Condition& condition, const FactBase& facts);

/// Forward chains to a fixpoint. Each step fires the unfired matching rule
/// with the highest salience, breaking ties by the lexicographically smallest
/// id; every rule fires at most once.
InferenceResult infer(std::span<const Rule> rules, std::span<const Fact> initial_facts);

/// Validated, immutable rule set.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  KnowledgeBase(std::vector<Rule> rules, const dataio::SampleCatalog& catalog);

  static KnowledgeBase parse(std::string_view source, const dataio::SampleCatalog& catalog);
  static KnowledgeBase load(const std::filesystem::path& path,
                            const dataio::SampleCatalog& catalog);

  std::span<const Rule> rules() const noexcept { return rules_; }
  bool empty() const noexcept { return rules_.empty(); }

 private:
  std::vector<Rule> rules_;
};

/// Rule file syntax, one block per rule, blocks separated by blank lines:
///
///   # comment
///   rule young-trend salience 5
///   if age = young
///   if gender != male
///   then assert segment trend
///   then boost S6 0.2
///
/// Comparators: = != < <= > >= (also the Unicode forms). With a catalog,
/// boosted samples must exist in it. Errors carry the 1-based line number.
std::vector<Rule> parse_rules(std::string_view source,
                              const dataio::SampleCatalog* catalog = nullptr);

/// gender, age and group facts for a consultation.
std::vector<Fact> consultation_facts(dataio::CustomerGroup group);

struct RecommendationEntry {
  std::size_t sample = 0;
  std::string sample_id;
  double blended = 0.0;
  double nn_score = 0.0;
  double rule_adjust = 0.0;
};

struct Recommendation {
  /// Sorted by blended score descending, ties by ascending sample index.
  std::vector<RecommendationEntry> entries;
  InferenceResult inference;
};

/// blended = nn_weight * network output + rule adjustment, for every sample.
/// Throws ConfigError when the network does not take 8 inputs or its output
/// size differs from the catalog size.
Recommendation recommend(const nnet::Network& net, std::span<const Rule> rules,
                         const dataio::SampleCatalog& catalog, dataio::CustomerGroup group,
                         double nn_weight = 1.0);

}  // namespace prefadvisor::expert
