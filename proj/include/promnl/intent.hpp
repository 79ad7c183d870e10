// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace promnl {

enum class Intent { CurrentValue, Count, Average, Percentile, TopN, Comparison, Trend, Rate };

enum class Measurement { Temperature, Memory, Latency, Cpu, Network, Power, Utilization, Tokens, Cache, Errors };

std::string_view to_string(Intent intent) noexcept;
std::optional<Intent> parse_intent(std::string_view s) noexcept;
std::string_view to_string(Measurement m) noexcept;
std::optional<Measurement> parse_measurement(std::string_view s) noexcept;

struct IntentResult {
  Intent intent = Intent::CurrentValue;
  std::set<Measurement> measurements;
  std::set<std::string> domain_terms;
  /// Triggers of the winning intent that occurred in the question.
  std::vector<std::string> matched_triggers;
  /// Entity kinds the question groups or ranks by ("model", "pod", ...).
  std::set<std::string> entities;
  /// From p50/p90/p95/p99/median when present.
  std::optional<double> quantile;
  /// From "top N" when present.
  std::optional<int> top_n;

  bool operator==(const IntentResult&) const = default;
};

struct IntentLexicon {
  std::map<Intent, std::vector<std::string>> triggers;
  std::vector<Intent> precedence;
  std::map<Measurement, std::vector<std::string>> measurements;
  std::vector<std::string> domain_terms;
  std::map<std::string, std::vector<std::string>> entities;

  static IntentLexicon from_json(const nlohmann::json& doc);
};

/// Throws Error(Input) for a blank question.
IntentResult detect_intent(std::string_view question, const IntentLexicon& lexicon);

}  // namespace promnl
