// SPDX-License-Identifier: Apache-2.0
#include "promnl/gpu_discovery.hpp"

#include "promnl/errors.hpp"
#include "promnl/text.hpp"

namespace promnl {

using nlohmann::json;

std::string_view to_string(Vendor vendor) noexcept {
  switch (vendor) {
    case Vendor::NVIDIA: return "NVIDIA";
    case Vendor::Intel: return "Intel";
    case Vendor::AMD: return "AMD";
    case Vendor::Framework: return "Framework";
    case Vendor::None: return "None";
  }
  return "None";
}

std::optional<Vendor> parse_vendor(std::string_view s) noexcept {
  for (Vendor v : {Vendor::NVIDIA, Vendor::Intel, Vendor::AMD, Vendor::Framework, Vendor::None}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

VendorPrefixConfig VendorPrefixConfig::from_json(const json& doc) {
  VendorPrefixConfig cfg;
  for (const auto& [vendor_name, list] : doc.items()) {
    const auto vendor = parse_vendor(vendor_name);
    if (!vendor || *vendor == Vendor::None) {
      throw Error(ErrorKind::Config, "vendor prefixes: unknown vendor '" + vendor_name + "'");
    }
    cfg.prefixes[*vendor] = list.get<std::vector<std::string>>();
  }
  return cfg;
}

void VendorPrefixConfig::add_custom(std::string_view comma_separated) {
  std::size_t start = 0;
  while (start <= comma_separated.size()) {
    auto end = comma_separated.find(',', start);
    if (end == std::string_view::npos) end = comma_separated.size();
    const auto item = text::trim(comma_separated.substr(start, end - start));
    if (!item.empty()) {
      bool known = false;
      for (const auto& p : custom_prefixes) known = known || p == item;
      if (!known) custom_prefixes.emplace_back(item);
    }
    start = end + 1;
  }
}

std::optional<Vendor> VendorPrefixConfig::match(std::string_view name) const {
  for (const auto& [vendor, list] : prefixes) {
    for (const auto& p : list) {
      if (name.starts_with(p)) return vendor;
    }
  }
  for (const auto& p : custom_prefixes) {
    if (name.starts_with(p)) return Vendor::Framework;
  }
  return std::nullopt;
}

PriorityPatterns PriorityPatterns::from_json(const json& doc) {
  PriorityPatterns out;
  if (const auto it = doc.find("default_priority"); it != doc.end()) {
    const auto p = parse_priority(it->get<std::string>());
    if (!p) throw Error(ErrorKind::Config, "priority patterns: bad default_priority");
    out.fallback = *p;
  }
  for (const auto& r : doc.at("high_priority_rules")) {
    Rule rule;
    const auto vendor = parse_vendor(r.value("vendor", "None"));
    if (!vendor) throw Error(ErrorKind::Config, "priority patterns: unknown vendor in rule");
    rule.vendor = *vendor;
    rule.source = r.at("regex").get<std::string>();
    try {
      rule.compiled = std::regex(rule.source, std::regex::ECMAScript | std::regex::optimize);
    } catch (const std::regex_error& e) {
      throw Error(ErrorKind::Config, "invalid priority pattern '" + rule.source + "': " + e.what());
    }
    out.rules.push_back(std::move(rule));
  }
  return out;
}

Priority assign_gpu_priority(std::string_view name, const PriorityPatterns& patterns) {
  const std::string subject(name);
  for (const auto& rule : patterns.rules) {
    if (std::regex_search(subject, rule.compiled)) return Priority::High;
  }
  return patterns.fallback;
}

Vendor elect_vendor(const std::map<Vendor, std::size_t>& counts) {
  Vendor best = Vendor::None;
  std::size_t best_count = 0;
  // Strict comparison keeps the earlier vendor on ties.
  for (Vendor v : {Vendor::NVIDIA, Vendor::Intel, Vendor::AMD}) {
    const auto it = counts.find(v);
    if (it != counts.end() && it->second > best_count) {
      best = v;
      best_count = it->second;
    }
  }
  if (best == Vendor::None) {
    const auto it = counts.find(Vendor::Framework);
    if (it != counts.end() && it->second > 0) best = Vendor::Framework;
  }
  return best;
}

DiscoveryResult discover_gpu_metrics(std::span<const std::string> all_names, const VendorPrefixConfig& prefixes,
                                     const PriorityPatterns& priorities, const KeywordRules& rules) {
  const auto started = std::chrono::steady_clock::now();
  DiscoveryResult result;

  std::vector<std::string> matched;
  for (const auto& name : all_names) {
    if (prefixes.matches_any(name)) matched.push_back(name);
  }

  for (auto& family : collapse_metric_families(matched)) {
    const auto vendor = prefixes.match(family.name);
    if (!vendor) continue;
    ++result.per_vendor_match_counts[*vendor];

    MetricEntry entry;
    entry.name = std::move(family.name);
    entry.type = family.type;
    entry.priority = assign_gpu_priority(entry.name, priorities);
    entry.keywords = generate_keywords(entry.name, entry.type, {}, rules, KeywordTiers::discovery());
    entry.category = std::string(kGpuCategory);
    result.discovered.push_back(std::move(entry));
  }

  result.primary_vendor = elect_vendor(result.per_vendor_match_counts);
  result.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - started);
  return result;
}

std::size_t merge_discovery(Catalog& catalog, const DiscoveryResult& result) {
  std::size_t added = 0;
  for (const auto& entry : result.discovered) {
    if (catalog.insert(entry)) ++added;
  }
  return added;
}

}  // namespace promnl
