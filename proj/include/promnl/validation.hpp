// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "promnl/catalog.hpp"
#include "promnl/gpu_discovery.hpp"
#include "promnl/keywords.hpp"

namespace promnl {

inline constexpr std::string_view kFallbackCategory = "observability";

/// Token-boundary prefixes ("etcd_", "etcd_disk_", ...) mapped to the category
/// that owns most catalog metrics under them.
struct PrefixMap {
  std::unordered_map<std::string, std::string> categories;
};

/// Prefixes of `name` ending at each '_' or ':' delimiter, shortest first.
std::vector<std::string> token_prefixes(std::string_view name);

PrefixMap build_prefix_map(const Catalog& catalog);

/// Category of the longest known prefix of `name`, or "observability".
std::string categorize_new_metric(std::string_view name, const PrefixMap& map);

struct AdoptedMetric {
  std::string name;
  std::string category;
  MetricType type = MetricType::Gauge;

  bool operator==(const AdoptedMetric&) const = default;
};

struct ValidationReport {
  std::vector<std::string> stale;
  std::vector<AdoptedMetric> adopted;
  std::size_t unchanged_count = 0;
  std::chrono::microseconds elapsed{0};

  bool empty() const noexcept { return stale.empty() && adopted.empty(); }
};

/// Compares the catalog with the live name set. Histogram and summary entries
/// count as live when any of their child series is. Live names claimed by
/// `gpu_prefixes` are left to GPU discovery and never adopted here.
ValidationReport validate_catalog(const Catalog& catalog, const std::unordered_set<std::string>& live_names,
                                  const VendorPrefixConfig* gpu_prefixes = nullptr);

/// Removes stale entries and inserts adopted ones at Medium priority. Applying
/// the same report again changes nothing.
void apply_report(Catalog& catalog, const ValidationReport& report, const KeywordRules& rules);

}  // namespace promnl
