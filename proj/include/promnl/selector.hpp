// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "promnl/catalog.hpp"
#include "promnl/intent.hpp"

namespace promnl {

struct ScoringTerm {
  std::string id;
  std::vector<std::string> question_phrases;
  std::vector<std::string> metric_phrases;
};

struct KeywordPattern {
  std::string id;
  int weight = 0;
  std::vector<ScoringTerm> terms;
};

struct ScoringConfig {
  std::vector<KeywordPattern> keyword_patterns;
  int type_match_bonus = 10;
  int specificity_per_token = 2;
  int specificity_cap = 8;
  int high_priority_bonus = 15;
  int medium_priority_bonus = 5;

  /// Throws Error(Config) on missing weights or empty phrase lists.
  static ScoringConfig from_json(const nlohmann::json& doc);
};

struct ScoredMetric {
  MetricEntry entry;
  int s_keyword = 0;
  int s_type = 0;
  int s_specificity = 0;
  int s_priority = 0;
  int s_total = 0;
  /// Ids of the keyword patterns that fired.
  std::vector<std::string> keyword_hits;

  bool operator==(const ScoredMetric&) const = default;
};

std::set<std::string> extract_category_hints(std::string_view question, const CategoryKeywords& category_keywords);

/// Whether (intent, type) is one of the preferred pairings.
bool is_preferred_type(Intent intent, MetricType type) noexcept;

ScoredMetric score_metric(std::string_view question, const MetricEntry& entry, const IntentResult& intent,
                          const ScoringConfig& cfg);

/// Strict ranking: higher total, then High priority, then smaller name.
bool ranks_before(const ScoredMetric& a, const ScoredMetric& b) noexcept;

/// Best entry out of an explicit candidate list. Throws Error(NoMetricFound)
/// when the list is empty.
ScoredMetric select_from(std::string_view question, const IntentResult& intent,
                         const std::vector<MetricEntry>& candidates, const ScoringConfig& cfg);

struct Selection {
  ScoredMetric best;
  std::set<std::string> hints;
  std::size_t candidate_count = 0;
};

/// Candidates come from the hinted categories (all priorities) or, without
/// hints, from High entries everywhere. Throws Error(NoMetricFound) when the
/// candidate set is empty.
Selection select_with_details(std::string_view question, const IntentResult& intent, const Catalog& catalog,
                              const ScoringConfig& cfg);

ScoredMetric select_best(std::string_view question, const IntentResult& intent, const Catalog& catalog,
                         const ScoringConfig& cfg);

}  // namespace promnl
