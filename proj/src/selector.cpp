// SPDX-License-Identifier: Apache-2.0
#include "promnl/selector.hpp"

#include <algorithm>
#include <optional>

#include "promnl/errors.hpp"
#include "promnl/text.hpp"

namespace promnl {

namespace {

std::vector<std::string> phrase_list(const nlohmann::json& node, const std::string& where) {
  if (!node.is_array() || node.empty()) throw Error(ErrorKind::Config, "scoring: " + where + " must be a non-empty array");
  std::vector<std::string> out;
  for (const auto& p : node) out.push_back(text::to_lower(p.get<std::string>()));
  return out;
}

// Name with '_' and ':' as word breaks, followed by the keywords.
std::string entry_haystack(const MetricEntry& entry) {
  std::string hay = entry.name;
  for (const auto& k : entry.keywords) {
    hay += ' ';
    hay += k;
  }
  return text::normalize(hay);
}

}  // namespace

ScoringConfig ScoringConfig::from_json(const nlohmann::json& doc) {
  ScoringConfig cfg;
  try {
    for (const auto& row : doc.at("keyword_patterns")) {
      KeywordPattern p;
      p.id = row.at("id").get<std::string>();
      p.weight = row.at("weight").get<int>();
      for (const auto& t : row.at("terms")) {
        ScoringTerm term;
        term.id = t.at("id").get<std::string>();
        term.question_phrases = phrase_list(t.at("question"), p.id + "/" + term.id + "/question");
        term.metric_phrases = phrase_list(t.at("metric"), p.id + "/" + term.id + "/metric");
        p.terms.push_back(std::move(term));
      }
      if (p.terms.empty()) throw Error(ErrorKind::Config, "scoring: pattern '" + p.id + "' has no terms");
      cfg.keyword_patterns.push_back(std::move(p));
    }
    cfg.type_match_bonus = doc.value("type_match_bonus", cfg.type_match_bonus);
    cfg.specificity_per_token = doc.value("specificity_per_token", cfg.specificity_per_token);
    cfg.specificity_cap = doc.value("specificity_cap", cfg.specificity_cap);
    if (const auto it = doc.find("priority_bonus"); it != doc.end()) {
      cfg.high_priority_bonus = it->value("High", cfg.high_priority_bonus);
      cfg.medium_priority_bonus = it->value("Medium", cfg.medium_priority_bonus);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("scoring: ") + e.what());
  }
  return cfg;
}

std::set<std::string> extract_category_hints(std::string_view question, const CategoryKeywords& category_keywords) {
  const auto q = text::normalize(question);
  std::set<std::string> hints;
  for (const auto& [category, keywords] : category_keywords) {
    for (const auto& k : keywords) {
      if (text::contains_phrase(q, k)) {
        hints.insert(category);
        break;
      }
    }
  }
  return hints;
}

bool is_preferred_type(Intent intent, MetricType type) noexcept {
  switch (intent) {
    case Intent::Percentile: return type == MetricType::Histogram;
    case Intent::Rate: return type == MetricType::Counter;
    case Intent::CurrentValue:
    case Intent::Trend: return type == MetricType::Gauge;
    case Intent::Count: return type == MetricType::Gauge || type == MetricType::Counter;
    default: return false;
  }
}

ScoredMetric score_metric(std::string_view question, const MetricEntry& entry, const IntentResult& intent,
                          const ScoringConfig& cfg) {
  ScoredMetric s;
  s.entry = entry;
  const auto q = text::normalize(question);
  const auto hay = entry_haystack(entry);

  for (const auto& pattern : cfg.keyword_patterns) {
    const bool fired = std::any_of(pattern.terms.begin(), pattern.terms.end(), [&](const ScoringTerm& t) {
      const bool in_question = std::any_of(t.question_phrases.begin(), t.question_phrases.end(),
                                           [&](const std::string& p) { return text::contains_phrase(q, p); });
      return in_question && std::any_of(t.metric_phrases.begin(), t.metric_phrases.end(),
                                         [&](const std::string& p) { return text::contains_phrase(hay, p); });
    });
    if (fired) {
      s.s_keyword += pattern.weight;
      s.keyword_hits.push_back(pattern.id);
    }
  }

  s.s_type = is_preferred_type(intent.intent, entry.type) ? cfg.type_match_bonus : 0;

  const auto tokens = static_cast<int>(text::split_metric_name(entry.name).size());
  s.s_specificity = std::min(cfg.specificity_cap, cfg.specificity_per_token * std::max(0, tokens - 1));

  s.s_priority = entry.priority == Priority::High ? cfg.high_priority_bonus : cfg.medium_priority_bonus;
  s.s_total = s.s_keyword + s.s_type + s.s_specificity + s.s_priority;
  return s;
}

bool ranks_before(const ScoredMetric& a, const ScoredMetric& b) noexcept {
  if (a.s_total != b.s_total) return a.s_total > b.s_total;
  if (a.entry.priority != b.entry.priority) return a.entry.priority == Priority::High;
  return a.entry.name < b.entry.name;
}

ScoredMetric select_from(std::string_view question, const IntentResult& intent,
                         const std::vector<MetricEntry>& candidates, const ScoringConfig& cfg) {
  if (candidates.empty()) throw Error(ErrorKind::NoMetricFound, "no metric found: empty candidate set");
  std::optional<ScoredMetric> best;
  for (const auto& entry : candidates) {
    auto scored = score_metric(question, entry, intent, cfg);
    if (!best || ranks_before(scored, *best)) best = std::move(scored);
  }
  return std::move(*best);
}

Selection select_with_details(std::string_view question, const IntentResult& intent, const Catalog& catalog,
                              const ScoringConfig& cfg) {
  Selection sel;
  sel.hints = extract_category_hints(question, catalog.category_keywords());
  const auto candidates = metrics_in_categories(catalog, sel.hints, !sel.hints.empty());
  sel.candidate_count = candidates.size();
  sel.best = select_from(question, intent, candidates, cfg);
  return sel;
}

ScoredMetric select_best(std::string_view question, const IntentResult& intent, const Catalog& catalog,
                         const ScoringConfig& cfg) {
  return select_with_details(question, intent, catalog, cfg).best;
}

}  // namespace promnl
