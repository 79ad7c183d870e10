// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "promnl/catalog.hpp"
#include "promnl/keywords.hpp"

namespace promnl {

enum class Vendor { NVIDIA, Intel, AMD, Framework, None };

std::string_view to_string(Vendor vendor) noexcept;
std::optional<Vendor> parse_vendor(std::string_view s) noexcept;

inline constexpr std::string_view kGpuCategory = "gpu_ai";

struct VendorPrefixConfig {
  std::map<Vendor, std::vector<std::string>> prefixes;
  /// Extra prefixes from GPU_METRIC_PREFIXES. They are discovered like
  /// framework prefixes and never take part in vendor election.
  std::vector<std::string> custom_prefixes;

  static VendorPrefixConfig from_json(const nlohmann::json& doc);

  /// Appends comma-separated prefixes; the defaults are never removed.
  void add_custom(std::string_view comma_separated);

  /// Vendor owning the first matching prefix. Custom matches report Framework.
  std::optional<Vendor> match(std::string_view name) const;
  bool matches_any(std::string_view name) const { return match(name).has_value(); }
};

struct PriorityPatterns {
  struct Rule {
    Vendor vendor = Vendor::None;
    std::string source;
    std::regex compiled;
  };
  std::vector<Rule> rules;
  Priority fallback = Priority::Medium;

  /// Throws Error(Config) on an invalid regex or unknown vendor.
  static PriorityPatterns from_json(const nlohmann::json& doc);
};

Priority assign_gpu_priority(std::string_view name, const PriorityPatterns& patterns);

struct DiscoveryResult {
  Vendor primary_vendor = Vendor::None;
  std::vector<MetricEntry> discovered;  // category is always gpu_ai
  std::map<Vendor, std::size_t> per_vendor_match_counts;
  std::chrono::microseconds elapsed{0};
};

/// Hardware vendor with the most matches (ties: NVIDIA, Intel, AMD). Framework
/// only when no hardware vendor matched; None when nothing matched.
Vendor elect_vendor(const std::map<Vendor, std::size_t>& counts);

DiscoveryResult discover_gpu_metrics(std::span<const std::string> all_names, const VendorPrefixConfig& prefixes,
                                     const PriorityPatterns& priorities, const KeywordRules& rules);

/// Adds discovered entries to gpu_ai. Names already in the catalog keep their
/// existing record. Returns the number of entries added.
std::size_t merge_discovery(Catalog& catalog, const DiscoveryResult& result);

}  // namespace promnl
