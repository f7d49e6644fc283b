#include <cmath>
#include <map>
#include <optional>

#include "prefadvisor/error.hpp"
#include "prefadvisor/expert.hpp"
#include "prefadvisor/text.hpp"

namespace prefadvisor::expert {

namespace {

std::optional<Comparator> parse_comparator(std::string_view token) {
  static const std::map<std::string_view, Comparator> kTokens{
      {"=", Comparator::Equal},        {"==", Comparator::Equal},
      {"!=", Comparator::NotEqual},    {"≠", Comparator::NotEqual},
      {"<", Comparator::Less},         {"<=", Comparator::LessEqual},
      {"≤", Comparator::LessEqual}, {">", Comparator::Greater},
      {">=", Comparator::GreaterEqual}, {"≥", Comparator::GreaterEqual},
  };
  const auto it = kTokens.find(token);
  if (it == kTokens.end()) return std::nullopt;
  return it->second;
}

// Text after the first `count` whitespace-separated tokens.
std::string_view rest_after(std::string_view line, std::size_t count) {
  std::size_t i = 0;
  for (std::size_t k = 0; k < count; ++k) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
  }
  return text::trim(line.substr(i));
}

struct Builder {
  Rule rule;
  std::size_t line = 0;
};

}  // namespace

std::vector<Rule> parse_rules(std::string_view source, const dataio::SampleCatalog* catalog) {
  std::vector<Rule> rules;
  std::map<std::string, std::size_t> seen_ids;
  std::optional<Builder> current;

  auto finish = [&]() {
    if (!current) return;
    if (current->rule.conditions.empty()) {
      throw RuleValidationError("rule '" + current->rule.id + "' has no 'if' conditions",
                                current->line);
    }
    rules.push_back(std::move(current->rule));
    current.reset();
  };

  const auto lines = text::split_lines(source);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    std::string_view line = lines[n];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = text::trim(line);
    if (line.empty()) {
      finish();
      continue;
    }

    const auto tokens = text::split_whitespace(line);
    const std::string keyword = text::to_lower(tokens[0]);

    if (keyword == "rule") {
      finish();
      if (tokens.size() != 2 && tokens.size() != 4) {
        throw RuleValidationError("expected 'rule <id> [salience N]'", line_no);
      }
      Builder b;
      b.line = line_no;
      b.rule.id = std::string(tokens[1]);
      if (tokens.size() == 4) {
        const auto salience = text::parse_int(tokens[3]);
        if (text::to_lower(tokens[2]) != "salience" || !salience) {
          throw RuleValidationError("expected 'salience <integer>'", line_no);
        }
        b.rule.salience = static_cast<int>(*salience);
      }
      if (const auto [it, inserted] = seen_ids.emplace(b.rule.id, line_no); !inserted) {
        throw RuleValidationError("duplicate rule id '" + b.rule.id + "' (first defined on line " +
                                      std::to_string(it->second) + ")",
                                  line_no);
      }
      current = std::move(b);
      continue;
    }

    if (!current) throw RuleValidationError("'" + keyword + "' outside a rule block", line_no);

    if (keyword == "if") {
      if (tokens.size() < 4) throw RuleValidationError("expected 'if <key> <op> <value>'", line_no);
      const auto op = parse_comparator(tokens[2]);
      if (!op) {
        throw RuleValidationError("unknown comparator '" + std::string(tokens[2]) + "'", line_no);
      }
      Condition c{std::string(tokens[1]), *op, parse_fact_value(rest_after(line, 3))};
      if (*op != Comparator::Equal && *op != Comparator::NotEqual &&
          !std::holds_alternative<double>(c.value)) {
        throw RuleValidationError("comparator '" + std::string(tokens[2]) +
                                      "' needs a numeric value, got '" + to_string(c.value) + "'",
                                  line_no);
      }
      current->rule.conditions.push_back(std::move(c));
    } else if (keyword == "then") {
      if (tokens.size() < 2) throw RuleValidationError("expected 'then assert|boost ...'", line_no);
      const std::string action = text::to_lower(tokens[1]);
      if (action == "assert") {
        if (tokens.size() < 4) {
          throw RuleValidationError("expected 'then assert <key> <value>'", line_no);
        }
        current->rule.actions.emplace_back(
            AssertFact{std::string(tokens[2]), parse_fact_value(rest_after(line, 3))});
      } else if (action == "boost") {
        if (tokens.size() != 4) {
          throw RuleValidationError("expected 'then boost <sample> <delta>'", line_no);
        }
        const auto delta = text::parse_double(tokens[3]);
        if (!delta || !std::isfinite(*delta)) {
          throw RuleValidationError("invalid boost amount '" + std::string(tokens[3]) + "'",
                                    line_no);
        }
        if (catalog && !catalog->find(tokens[2])) {
          throw RuleValidationError("unknown sample '" + std::string(tokens[2]) + "'", line_no);
        }
        current->rule.actions.emplace_back(AdjustScore{std::string(tokens[2]), *delta});
      } else {
        throw RuleValidationError("unknown action '" + std::string(tokens[1]) + "'", line_no);
      }
    } else {
      throw RuleValidationError("unknown keyword '" + std::string(tokens[0]) + "'", line_no);
    }
  }
  finish();
  return rules;
}

KnowledgeBase KnowledgeBase::parse(std::string_view source, const dataio::SampleCatalog& catalog) {
  return KnowledgeBase(parse_rules(source, &catalog), catalog);
}

KnowledgeBase KnowledgeBase::load(const std::filesystem::path& path,
                                  const dataio::SampleCatalog& catalog) {
  return parse(text::read_file(path), catalog);
}

}  // namespace prefadvisor::expert
