// SPDX-License-Identifier: Apache-2.0
#include "promnl/intent.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "promnl/errors.hpp"
#include "promnl/text.hpp"

namespace promnl {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Intent, std::string_view>, 8> kIntentNames{{
    {Intent::CurrentValue, "current_value"},
    {Intent::Count, "count"},
    {Intent::Average, "average"},
    {Intent::Percentile, "percentile"},
    {Intent::TopN, "top_n"},
    {Intent::Comparison, "comparison"},
    {Intent::Trend, "trend"},
    {Intent::Rate, "rate"},
}};

constexpr std::array<std::pair<Measurement, std::string_view>, 10> kMeasurementNames{{
    {Measurement::Temperature, "temperature"},
    {Measurement::Memory, "memory"},
    {Measurement::Latency, "latency"},
    {Measurement::Cpu, "cpu"},
    {Measurement::Network, "network"},
    {Measurement::Power, "power"},
    {Measurement::Utilization, "utilization"},
    {Measurement::Tokens, "tokens"},
    {Measurement::Cache, "cache"},
    {Measurement::Errors, "errors"},
}};

constexpr std::array<std::pair<std::string_view, double>, 5> kQuantileWords{{
    {"p50", 0.5}, {"median", 0.5}, {"p90", 0.9}, {"p95", 0.95}, {"p99", 0.99},
}};

constexpr std::array<std::string_view, 20> kNumberWords{
    "one",    "two",     "three",   "four",     "five",     "six",     "seven",     "eight",    "nine",     "ten",
    "eleven", "twelve",  "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty",
};

std::optional<int> parse_small_int(std::string_view word) {
  for (std::size_t i = 0; i < kNumberWords.size(); ++i) {
    if (kNumberWords[i] == word) return static_cast<int>(i + 1);
  }
  int value = 0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc{} || ptr != word.data() + word.size()) return std::nullopt;
  return value;
}

}  // namespace

std::string_view to_string(Intent intent) noexcept {
  for (const auto& [i, name] : kIntentNames) {
    if (i == intent) return name;
  }
  return "current_value";
}

std::optional<Intent> parse_intent(std::string_view s) noexcept {
  for (const auto& [i, name] : kIntentNames) {
    if (name == s) return i;
  }
  return std::nullopt;
}

std::string_view to_string(Measurement m) noexcept {
  for (const auto& [v, name] : kMeasurementNames) {
    if (v == m) return name;
  }
  return "temperature";
}

std::optional<Measurement> parse_measurement(std::string_view s) noexcept {
  for (const auto& [v, name] : kMeasurementNames) {
    if (name == s) return v;
  }
  return std::nullopt;
}

IntentLexicon IntentLexicon::from_json(const json& doc) {
  IntentLexicon lex;
  for (const auto& [name, list] : doc.at("triggers").items()) {
    const auto intent = parse_intent(name);
    if (!intent) throw Error(ErrorKind::Config, "intent lexicon: unknown intent '" + name + "'");
    lex.triggers[*intent] = list.get<std::vector<std::string>>();
  }
  for (const auto& name : doc.at("precedence")) {
    const auto intent = parse_intent(name.get<std::string>());
    if (!intent) throw Error(ErrorKind::Config, "intent lexicon: unknown intent in precedence");
    lex.precedence.push_back(*intent);
  }
  for (const auto& [intent, list] : lex.triggers) {
    if (std::find(lex.precedence.begin(), lex.precedence.end(), intent) == lex.precedence.end()) {
      throw Error(ErrorKind::Config, "intent lexicon: '" + std::string(to_string(intent)) + "' missing from precedence");
    }
  }
  if (const auto it = doc.find("measurements"); it != doc.end()) {
    for (const auto& [name, list] : it->items()) {
      const auto m = parse_measurement(name);
      if (!m) throw Error(ErrorKind::Config, "intent lexicon: unknown measurement '" + name + "'");
      lex.measurements[*m] = list.get<std::vector<std::string>>();
    }
  }
  if (const auto it = doc.find("domain_terms"); it != doc.end()) {
    lex.domain_terms = it->get<std::vector<std::string>>();
  }
  if (const auto it = doc.find("entities"); it != doc.end()) {
    lex.entities = it->get<std::map<std::string, std::vector<std::string>>>();
  }
  return lex;
}

IntentResult detect_intent(std::string_view question, const IntentLexicon& lexicon) {
  if (text::trim(question).empty()) throw Error(ErrorKind::Input, "question is empty");
  const std::string q = text::normalize(question);

  IntentResult result;
  bool decided = false;
  for (Intent intent : lexicon.precedence) {
    const auto it = lexicon.triggers.find(intent);
    if (it == lexicon.triggers.end()) continue;
    std::vector<std::string> hits;
    for (const auto& trigger : it->second) {
      if (text::contains_phrase(q, trigger)) hits.push_back(trigger);
    }
    if (!hits.empty()) {
      result.intent = intent;
      result.matched_triggers = std::move(hits);
      decided = true;
      break;
    }
  }
  if (!decided) result.intent = Intent::CurrentValue;

  for (const auto& [m, phrases] : lexicon.measurements) {
    for (const auto& p : phrases) {
      if (text::contains_phrase(q, p)) {
        result.measurements.insert(m);
        break;
      }
    }
  }
  for (const auto& term : lexicon.domain_terms) {
    if (text::contains_phrase(q, term)) result.domain_terms.insert(text::to_lower(term));
  }
  for (const auto& [entity, phrases] : lexicon.entities) {
    for (const auto& p : phrases) {
      if (text::contains_phrase(q, p)) {
        result.entities.insert(entity);
        break;
      }
    }
  }

  for (const auto& [word, value] : kQuantileWords) {
    if (text::contains_phrase(q, word)) {
      result.quantile = value;
      break;
    }
  }

  const auto ws = text::words(q);
  for (std::size_t i = 0; i + 1 < ws.size(); ++i) {
    if (ws[i] != "top") continue;
    if (const auto n = parse_small_int(ws[i + 1]); n && *n > 0 && *n <= 1000) {
      result.top_n = *n;
      break;
    }
  }
  return result;
}

}  // namespace promnl
