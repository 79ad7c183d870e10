// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <regex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "promnl/catalog.hpp"

namespace promnl {

struct KeywordPatternRule {
  std::string source;
  std::regex compiled;
  std::vector<std::string> keywords;

  /// Throws Error(Config) when `source` is not a valid regular expression.
  static KeywordPatternRule make(std::string source, std::vector<std::string> keywords);
};

struct KeywordRules {
  std::unordered_map<std::string, std::vector<std::string>> curated;
  std::map<MetricType, std::vector<std::string>> type_keywords;
  std::vector<KeywordPatternRule> patterns;  // order is significant
  std::unordered_set<std::string> stopwords;

  /// Accepts the keyword-rules file layout; missing sections stay empty.
  static KeywordRules from_json(const nlohmann::json& doc);

  /// Adds curated entries from `doc["curated"]`; existing names are kept.
  void merge_curated(const nlohmann::json& doc);
};

/// Which of the five keyword sources contribute.
struct KeywordTiers {
  bool curated = true;
  bool type_based = true;
  bool pattern = true;
  bool name_tokens = true;
  bool help_text = true;

  static constexpr KeywordTiers all() { return {}; }
  /// Discovery has no HELP text yet.
  static constexpr KeywordTiers discovery() { return {true, true, true, true, false}; }
  /// Metrics adopted during validation.
  static constexpr KeywordTiers adoption() { return {false, true, true, true, false}; }
};

/// Assembles keywords tier by tier (curated, type, pattern, name tokens, help
/// words), deduplicated in first-seen order and capped at kMaxKeywords so the
/// earlier tiers always survive.
std::vector<std::string> generate_keywords(std::string_view name, MetricType type, std::string_view help,
                                           const KeywordRules& rules, KeywordTiers tiers = KeywordTiers::all());

/// Fills keywords for entries that have none.
void fill_missing_keywords(Catalog& catalog, const KeywordRules& rules);

}  // namespace promnl
