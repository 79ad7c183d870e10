// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace promnl {

enum class MetricType { Counter, Gauge, Histogram, Summary };
enum class Priority { High, Medium };

std::string_view to_string(MetricType type) noexcept;
std::string_view to_string(Priority priority) noexcept;
std::optional<MetricType> parse_metric_type(std::string_view s) noexcept;
std::optional<Priority> parse_priority(std::string_view s) noexcept;

inline constexpr std::size_t kMaxKeywords = 12;

struct MetricEntry {
  std::string name;
  MetricType type = MetricType::Gauge;
  std::string help;
  Priority priority = Priority::Medium;
  std::vector<std::string> keywords;
  std::string category;

  bool operator==(const MetricEntry&) const = default;
};

struct CategoryPriority {
  std::string category;
  Priority priority = Priority::Medium;

  bool operator==(const CategoryPriority&) const = default;
};

/// The 17 registered category ids, sorted.
const std::vector<std::string>& category_taxonomy();
bool is_registered_category(std::string_view id);

/// Letters, digits, '_' and ':'; must not start with a digit.
bool is_valid_metric_name(std::string_view name) noexcept;

using CategoryKeywords = std::map<std::string, std::vector<std::string>>;

// Category-indexed metric store. Each category list is kept sorted by name and
// every entry is mirrored in the flat name index.
class Catalog {
 public:
  Catalog() = default;

  const std::map<std::string, std::vector<MetricEntry>>& categories() const noexcept { return categories_; }
  const std::unordered_map<std::string, CategoryPriority>& flat_lookup() const noexcept { return flat_; }

  std::size_t size() const noexcept { return flat_.size(); }
  bool empty() const noexcept { return flat_.empty(); }
  bool contains(std::string_view name) const;
  const MetricEntry* find(std::string_view name) const;

  /// Adds the entry unless the name is already present. Throws Error(Validation)
  /// for unregistered categories or illegal names.
  bool insert(MetricEntry entry);
  bool erase(std::string_view name);

  const CategoryKeywords& category_keywords() const noexcept { return category_keywords_; }
  void set_category_keywords(CategoryKeywords keywords) { category_keywords_ = std::move(keywords); }

  const std::string& source_version() const noexcept { return source_version_; }
  void set_source_version(std::string v) { source_version_ = std::move(v); }

  std::chrono::system_clock::time_point loaded_at() const noexcept { return loaded_at_; }
  void set_loaded_at(std::chrono::system_clock::time_point t) noexcept { loaded_at_ = t; }

  /// Structural equality: entries, category keywords and version. loaded_at is ignored.
  bool operator==(const Catalog& other) const;

 private:
  std::map<std::string, std::vector<MetricEntry>> categories_;
  std::unordered_map<std::string, CategoryPriority> flat_;
  CategoryKeywords category_keywords_;
  std::string source_version_;
  std::chrono::system_clock::time_point loaded_at_{};
};

/// Parses catalog JSON (see README for the schema). Throws ParseError on
/// malformed JSON and Error(Validation) on schema or bijection violations.
Catalog load_catalog(std::string_view json_bytes);

/// Serializes back to the catalog JSON schema.
std::string dump_catalog(const Catalog& catalog, int indent = -1);

std::optional<CategoryPriority> lookup_metric(const Catalog& catalog, std::string_view name);

/// With a non-empty category set: every entry of those categories, Medium
/// entries only when include_medium. With an empty set: High entries of all
/// categories. Ordered by (category, name).
std::vector<MetricEntry> metrics_in_categories(const Catalog& catalog,
                                               const std::set<std::string>& categories,
                                               bool include_medium);

struct CatalogStats {
  std::size_t total = 0;
  std::map<std::string, std::size_t> per_category;
  std::size_t high = 0;
  std::size_t medium = 0;

  bool operator==(const CatalogStats&) const = default;
};

CatalogStats catalog_stats(const Catalog& catalog);

/// A metric family reconstructed from raw exposition names: histogram and
/// summary children (_bucket, _sum, _count) fold into their base name.
struct MetricFamily {
  std::string name;
  MetricType type = MetricType::Gauge;

  bool operator==(const MetricFamily&) const = default;
};

std::vector<MetricFamily> collapse_metric_families(std::span<const std::string> names);

/// Raw series names a catalog entry is exposed under.
std::vector<std::string> exposed_series_names(const MetricEntry& entry);

// Holds the current catalog generation. Readers take an immutable snapshot;
// writers are serialized and publish a fresh generation in one swap.
class CatalogStore {
 public:
  explicit CatalogStore(Catalog initial = {});

  std::shared_ptr<const Catalog> snapshot() const;
  std::uint64_t generation() const;

  template <class Mutator>
  void update(Mutator&& mutate) {
    std::lock_guard writer(writer_mutex_);
    auto next = std::make_shared<Catalog>(*snapshot());
    mutate(*next);
    publish(std::move(next));
  }

  void replace(Catalog catalog);

 private:
  void publish(std::shared_ptr<const Catalog> next);

  std::mutex writer_mutex_;
  mutable std::mutex swap_mutex_;
  std::shared_ptr<const Catalog> current_;
  std::uint64_t generation_ = 0;
};

}  // namespace promnl
