#include "prefadvisor/expert.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "prefadvisor/error.hpp"
#include "prefadvisor/model_io.hpp"
#include "prefadvisor/text.hpp"

namespace prefadvisor::expert {

namespace {

bool is_ordering(Comparator op) {
  return op == Comparator::Less || op == Comparator::LessEqual || op == Comparator::Greater ||
         op == Comparator::GreaterEqual;
}

bool values_equal(const FactValue& a, const FactValue& b) {
  if (a.index() != b.index()) return false;
  if (const auto* s = std::get_if<std::string>(&a)) {
    return text::to_lower(*s) == text::to_lower(std::get<std::string>(b));
  }
  return std::get<double>(a) == std::get<double>(b);
}

// Agenda order: higher salience first, then smaller id.
bool precedes(const Rule& a, const Rule& b) {
  if (a.salience != b.salience) return a.salience > b.salience;
  return a.id < b.id;
}

}  // namespace

std::string to_string(const FactValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  return nnet::format_double(std::get<double>(value));
}

FactValue parse_fact_value(std::string_view token) {
  token = text::trim(token);
  if (const auto number = text::parse_double(token)) return *number;
  return std::string(token);
}

std::string_view to_string(Comparator op) {
  switch (op) {
    case Comparator::Equal: return "=";
    case Comparator::NotEqual: return "!=";
    case Comparator::Less: return "<";
    case Comparator::LessEqual: return "<=";
    case Comparator::Greater: return ">";
    case Comparator::GreaterEqual: return ">=";
  }
  return "?";
}

void validate_rules(std::span<const Rule> rules, const dataio::SampleCatalog* catalog) {
  std::set<std::string> ids;
  for (const Rule& rule : rules) {
    if (rule.id.empty()) throw RuleValidationError("rule with empty id");
    if (!ids.insert(rule.id).second) {
      throw RuleValidationError("duplicate rule id '" + rule.id + "'");
    }
    if (rule.conditions.empty()) {
      throw RuleValidationError("rule '" + rule.id + "' has no conditions");
    }
    for (const Condition& c : rule.conditions) {
      if (c.key.empty()) throw RuleValidationError("rule '" + rule.id + "': empty fact key");
      if (is_ordering(c.op) && !std::holds_alternative<double>(c.value)) {
        throw RuleValidationError("rule '" + rule.id + "': comparator '" +
                                  std::string(to_string(c.op)) + "' needs a numeric value, got '" +
                                  to_string(c.value) + "'");
      }
    }
    for (const Action& a : rule.actions) {
      if (const auto* boost = std::get_if<AdjustScore>(&a)) {
        if (catalog && !catalog->find(boost->sample)) {
          throw RuleValidationError("rule '" + rule.id + "': unknown sample '" + boost->sample +
                                    "'");
        }
      } else if (std::get<AssertFact>(a).key.empty()) {
        throw RuleValidationError("rule '" + rule.id + "': empty fact key");
      }
    }
  }
}

bool holds(const Condition& condition, const FactBase& facts) {
  const auto it = facts.find(condition.key);
  if (it == facts.end()) return false;
  const FactValue& fact = it->second;
  switch (condition.op) {
    case Comparator::Equal: return values_equal(fact, condition.value);
    case Comparator::NotEqual: return !values_equal(fact, condition.value);
    default: break;
  }
  const auto* lhs = std::get_if<double>(&fact);
  const auto* rhs = std::get_if<double>(&condition.value);
  if (!lhs || !rhs) return false;
  switch (condition.op) {
    case Comparator::Less: return *lhs < *rhs;
    case Comparator::LessEqual: return *lhs <= *rhs;
    case Comparator::Greater: return *lhs > *rhs;
    case Comparator::GreaterEqual: return *lhs >= *rhs;
    default: return false;
  }
}

InferenceResult infer(std::span<const Rule> rules, std::span<const Fact> initial_facts) {
  validate_rules(rules);

  InferenceResult result;
  for (const Fact& fact : initial_facts) {
    if (fact.key.empty()) throw InvalidArgument("fact with empty key");
    if (!result.facts.emplace(fact.key, fact.value).second) {
      throw InvalidArgument("duplicate fact key '" + fact.key + "'");
    }
  }

  std::vector<std::size_t> agenda(rules.size());
  std::iota(agenda.begin(), agenda.end(), std::size_t{0});
  std::sort(agenda.begin(), agenda.end(),
            [&](std::size_t a, std::size_t b) { return precedes(rules[a], rules[b]); });
  std::vector<bool> fired(rules.size(), false);

  while (true) {
    const Rule* next = nullptr;
    for (std::size_t idx : agenda) {
      if (fired[idx]) continue;
      const Rule& rule = rules[idx];
      const bool match = std::all_of(rule.conditions.begin(), rule.conditions.end(),
                                     [&](const Condition& c) { return holds(c, result.facts); });
      if (match) {
        fired[idx] = true;
        next = &rule;
        break;
      }
    }
    if (!next) break;

    result.fired.push_back(next->id);
    result.log.push_back("fire " + next->id);
    for (const Action& action : next->actions) {
      if (const auto* assertion = std::get_if<AssertFact>(&action)) {
        auto [it, inserted] = result.facts.try_emplace(assertion->key, assertion->value);
        if (inserted) {
          result.log.push_back("  assert " + assertion->key + " = " + to_string(assertion->value));
        } else {
          result.log.push_back("  assert " + assertion->key + " = " + to_string(assertion->value) +
                               " (overwrites " + to_string(it->second) + ")");
          it->second = assertion->value;
        }
      } else {
        const auto& boost = std::get<AdjustScore>(action);
        result.adjustments[boost.sample] += boost.delta;
        result.log.push_back("  boost " + boost.sample + " by " + nnet::format_double(boost.delta));
      }
    }
  }
  return result;
}

KnowledgeBase::KnowledgeBase(std::vector<Rule> rules, const dataio::SampleCatalog& catalog)
    : rules_(std::move(rules)) {
  validate_rules(rules_, &catalog);
}

std::vector<Fact> consultation_facts(dataio::CustomerGroup group) {
  return {
      {"gender", std::string(dataio::to_string(group.gender))},
      {"age", std::string(dataio::to_string(group.age))},
      {"group", group.token()},
  };
}

Recommendation recommend(const nnet::Network& net, std::span<const Rule> rules,
                         const dataio::SampleCatalog& catalog, dataio::CustomerGroup group,
                         double nn_weight) {
  if (net.input_size() != dataio::kGroupCount) {
    throw ConfigError("network takes " + std::to_string(net.input_size()) +
                      " inputs; a consultation needs " + std::to_string(dataio::kGroupCount));
  }
  if (net.output_size() != catalog.size()) {
    throw ConfigError("network has " + std::to_string(net.output_size()) +
                      " outputs but the catalog lists " + std::to_string(catalog.size()) +
                      " samples");
  }
  validate_rules(rules, &catalog);

  Recommendation rec;
  rec.inference = infer(rules, consultation_facts(group));
  const nnet::ForwardTrace trace = nnet::forward(net, dataio::encode_group(group));
  const auto scores = trace.output();

  std::vector<double> adjust(catalog.size(), 0.0);
  for (const auto& [sample, delta] : rec.inference.adjustments) {
    adjust[*catalog.find(sample)] += delta;
  }

  for (std::size_t s = 0; s < catalog.size(); ++s) {
    rec.entries.push_back(
        {s, catalog.id(s), nn_weight * scores[s] + adjust[s], scores[s], adjust[s]});
  }
  std::stable_sort(rec.entries.begin(), rec.entries.end(),
                   [](const RecommendationEntry& a, const RecommendationEntry& b) {
                     return a.blended > b.blended;
                   });
  return rec;
}

}  // namespace prefadvisor::expert
