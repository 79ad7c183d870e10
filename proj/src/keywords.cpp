// SPDX-License-Identifier: Apache-2.0
#include "promnl/keywords.hpp"

#include <unordered_set>

#include "promnl/errors.hpp"
#include "promnl/text.hpp"

namespace promnl {

using nlohmann::json;

namespace {

constexpr std::size_t kMinNameToken = 3;

std::vector<std::string> lower_all(const json& arr) {
  std::vector<std::string> out;
  for (const auto& v : arr) out.push_back(text::to_lower(v.get<std::string>()));
  return out;
}

}  // namespace

KeywordPatternRule KeywordPatternRule::make(std::string source, std::vector<std::string> keywords) {
  try {
    std::regex re(source, std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
    return {std::move(source), std::move(re), std::move(keywords)};
  } catch (const std::regex_error& e) {
    throw Error(ErrorKind::Config, "invalid keyword pattern '" + source + "': " + e.what());
  }
}

KeywordRules KeywordRules::from_json(const json& doc) {
  KeywordRules rules;
  rules.merge_curated(doc);
  if (const auto it = doc.find("type_keywords"); it != doc.end()) {
    for (const auto& [type_name, kws] : it->items()) {
      const auto type = parse_metric_type(type_name);
      if (!type) throw Error(ErrorKind::Config, "type_keywords: unknown metric type '" + type_name + "'");
      rules.type_keywords[*type] = lower_all(kws);
    }
  }
  if (const auto it = doc.find("patterns"); it != doc.end()) {
    for (const auto& p : *it) {
      rules.patterns.push_back(KeywordPatternRule::make(p.at("regex").get<std::string>(), lower_all(p.at("keywords"))));
    }
  }
  if (const auto it = doc.find("stopwords"); it != doc.end()) {
    for (const auto& w : *it) rules.stopwords.insert(text::to_lower(w.get<std::string>()));
  }
  return rules;
}

void KeywordRules::merge_curated(const json& doc) {
  const auto it = doc.find("curated");
  if (it == doc.end()) return;
  for (const auto& [name, kws] : it->items()) curated.emplace(name, lower_all(kws));
}

std::vector<std::string> generate_keywords(std::string_view name, MetricType type, std::string_view help,
                                           const KeywordRules& rules, KeywordTiers tiers) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  auto add = [&](std::string kw) {
    if (out.size() >= kMaxKeywords || kw.empty()) return;
    if (seen.insert(kw).second) out.push_back(std::move(kw));
  };

  if (tiers.curated) {
    if (const auto it = rules.curated.find(std::string(name)); it != rules.curated.end()) {
      for (const auto& kw : it->second) add(kw);
    }
  }
  if (tiers.type_based) {
    if (const auto it = rules.type_keywords.find(type); it != rules.type_keywords.end()) {
      for (const auto& kw : it->second) add(kw);
    }
  }
  if (tiers.pattern && out.size() < kMaxKeywords) {
    const std::string subject(name);
    for (const auto& rule : rules.patterns) {
      if (!std::regex_search(subject, rule.compiled)) continue;
      for (const auto& kw : rule.keywords) add(kw);
    }
  }
  if (tiers.name_tokens) {
    for (const auto& token : text::split_metric_name(name)) {
      if (token.size() >= kMinNameToken) add(text::to_lower(token));
    }
  }
  if (tiers.help_text) {
    for (auto& word : text::words(text::normalize(help))) {
      if (word.size() < kMinNameToken || rules.stopwords.count(word) != 0) continue;
      add(std::move(word));
    }
  }
  return out;
}

void fill_missing_keywords(Catalog& catalog, const KeywordRules& rules) {
  std::vector<MetricEntry> pending;
  for (const auto& [category, entries] : catalog.categories()) {
    for (const auto& e : entries) {
      if (e.keywords.empty()) pending.push_back(e);
    }
  }
  for (auto& e : pending) {
    catalog.erase(e.name);
    e.keywords = generate_keywords(e.name, e.type, e.help, rules);
    catalog.insert(std::move(e));
  }
}

}  // namespace promnl
