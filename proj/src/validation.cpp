// SPDX-License-Identifier: Apache-2.0
#include "promnl/validation.hpp"

#include <algorithm>
#include <map>

namespace promnl {

std::vector<std::string> token_prefixes(std::string_view name) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i + 1 < name.size(); ++i) {
    if ((name[i] == '_' || name[i] == ':') && i > 0) out.emplace_back(name.substr(0, i + 1));
  }
  return out;
}

PrefixMap build_prefix_map(const Catalog& catalog) {
  std::unordered_map<std::string, std::map<std::string, std::size_t>> votes;
  for (const auto& [category, entries] : catalog.categories()) {
    for (const auto& e : entries) {
      for (auto& p : token_prefixes(e.name)) ++votes[std::move(p)][category];
    }
  }

  PrefixMap map;
  for (auto& [prefix, tally] : votes) {
    // std::map iterates categories in ascending order, so the first maximum
    // is the lexicographically smallest among ties.
    const auto best = std::max_element(tally.begin(), tally.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
    map.categories.emplace(prefix, best->first);
  }
  return map;
}

std::string categorize_new_metric(std::string_view name, const PrefixMap& map) {
  const auto prefixes = token_prefixes(name);
  for (auto it = prefixes.rbegin(); it != prefixes.rend(); ++it) {
    if (const auto hit = map.categories.find(*it); hit != map.categories.end()) return hit->second;
  }
  return std::string(kFallbackCategory);
}

ValidationReport validate_catalog(const Catalog& catalog, const std::unordered_set<std::string>& live_names,
                                  const VendorPrefixConfig* gpu_prefixes) {
  const auto started = std::chrono::steady_clock::now();
  ValidationReport report;

  std::unordered_set<std::string> covered;
  for (const auto& [category, entries] : catalog.categories()) {
    for (const auto& e : entries) {
      bool live = false;
      for (auto& series : exposed_series_names(e)) {
        live = live || live_names.count(series) != 0;
        covered.insert(std::move(series));
      }
      if (live) {
        ++report.unchanged_count;
      } else {
        report.stale.push_back(e.name);
      }
    }
  }
  std::sort(report.stale.begin(), report.stale.end());

  std::vector<std::string> fresh;
  for (const auto& name : live_names) {
    if (covered.count(name) != 0) continue;
    if (gpu_prefixes != nullptr && gpu_prefixes->matches_any(name)) continue;
    if (!is_valid_metric_name(name)) continue;
    fresh.push_back(name);
  }
  std::sort(fresh.begin(), fresh.end());

  if (!fresh.empty()) {
    const auto map = build_prefix_map(catalog);
    for (auto& family : collapse_metric_families(fresh)) {
      if (catalog.contains(family.name)) continue;
      auto category = categorize_new_metric(family.name, map);
      report.adopted.push_back({std::move(family.name), std::move(category), family.type});
    }
  }

  report.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - started);
  return report;
}

void apply_report(Catalog& catalog, const ValidationReport& report, const KeywordRules& rules) {
  for (const auto& name : report.stale) catalog.erase(name);
  for (const auto& a : report.adopted) {
    if (catalog.contains(a.name)) continue;
    MetricEntry entry;
    entry.name = a.name;
    entry.type = a.type;
    entry.priority = Priority::Medium;
    entry.keywords = generate_keywords(a.name, a.type, {}, rules, KeywordTiers::adoption());
    entry.category = a.category;
    catalog.insert(std::move(entry));
  }
}

}  // namespace promnl
