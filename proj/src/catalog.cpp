// SPDX-License-Identifier: Apache-2.0
#include "promnl/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "json.hpp"
#include "promnl/errors.hpp"
#include "promnl/text.hpp"

namespace promnl {

using nlohmann::json;

std::string_view to_string(MetricType type) noexcept {
  switch (type) {
    case MetricType::Counter: return "counter";
    case MetricType::Gauge: return "gauge";
    case MetricType::Histogram: return "histogram";
    case MetricType::Summary: return "summary";
  }
  return "gauge";
}

std::string_view to_string(Priority priority) noexcept {
  return priority == Priority::High ? "High" : "Medium";
}

std::optional<MetricType> parse_metric_type(std::string_view s) noexcept {
  if (s == "counter") return MetricType::Counter;
  if (s == "gauge") return MetricType::Gauge;
  if (s == "histogram") return MetricType::Histogram;
  if (s == "summary") return MetricType::Summary;
  return std::nullopt;
}

std::optional<Priority> parse_priority(std::string_view s) noexcept {
  if (s == "High") return Priority::High;
  if (s == "Medium") return Priority::Medium;
  return std::nullopt;
}

const std::vector<std::string>& category_taxonomy() {
  static const std::vector<std::string> ids = {
      "api_server",  "autoscaling",   "cluster_health", "container_runtime", "controller_manager", "coredns",
      "etcd",        "gpu_ai",        "kube_proxy",     "kubelet",           "networking",         "node_hardware",
      "observability", "pod_container", "scheduler",    "security",          "storage",
  };
  return ids;
}

bool is_registered_category(std::string_view id) {
  const auto& ids = category_taxonomy();
  return std::binary_search(ids.begin(), ids.end(), id);
}

bool is_valid_metric_name(std::string_view name) noexcept {
  if (name.empty()) return false;
  if (std::isdigit(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':';
  });
}

// ---- Catalog ---------------------------------------------------------------

namespace {

auto name_less = [](const MetricEntry& e, std::string_view name) { return e.name < name; };

}  // namespace

bool Catalog::contains(std::string_view name) const { return flat_.count(std::string(name)) != 0; }

const MetricEntry* Catalog::find(std::string_view name) const {
  const auto it = flat_.find(std::string(name));
  if (it == flat_.end()) return nullptr;
  const auto& list = categories_.at(it->second.category);
  const auto pos = std::lower_bound(list.begin(), list.end(), name, name_less);
  return (pos != list.end() && pos->name == name) ? &*pos : nullptr;
}

bool Catalog::insert(MetricEntry entry) {
  if (!is_valid_metric_name(entry.name)) {
    throw Error(ErrorKind::Validation, "illegal metric name '" + entry.name + "'");
  }
  if (!is_registered_category(entry.category)) {
    throw Error(ErrorKind::Validation, "unknown category id '" + entry.category + "'");
  }
  if (flat_.count(entry.name) != 0) return false;

  auto& list = categories_[entry.category];
  const auto pos = std::lower_bound(list.begin(), list.end(), entry.name, name_less);
  flat_.emplace(entry.name, CategoryPriority{entry.category, entry.priority});
  list.insert(pos, std::move(entry));
  return true;
}

bool Catalog::erase(std::string_view name) {
  const auto it = flat_.find(std::string(name));
  if (it == flat_.end()) return false;
  auto cat = categories_.find(it->second.category);
  auto& list = cat->second;
  const auto pos = std::lower_bound(list.begin(), list.end(), name, name_less);
  list.erase(pos);
  if (list.empty()) categories_.erase(cat);
  flat_.erase(it);
  return true;
}

bool Catalog::operator==(const Catalog& other) const {
  return categories_ == other.categories_ && category_keywords_ == other.category_keywords_ &&
         source_version_ == other.source_version_;
}

// ---- load / dump -----------------------------------------------------------

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::Validation, what); }

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) invalid(where + ": missing string field '" + key + "'");
  return it->get<std::string>();
}

std::vector<std::string> normalize_keywords(const json& arr, const std::string& metric) {
  if (!arr.is_array()) invalid(metric + ": 'keywords' must be an array");
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& k : arr) {
    if (!k.is_string()) invalid(metric + ": keywords must be strings");
    auto kw = text::to_lower(text::trim(k.get<std::string>()));
    if (kw.empty()) continue;
    if (seen.insert(kw).second) out.push_back(std::move(kw));
  }
  if (out.size() > kMaxKeywords) {
    invalid(metric + ": " + std::to_string(out.size()) + " keywords exceeds the limit of " +
            std::to_string(kMaxKeywords));
  }
  return out;
}

}  // namespace

Catalog load_catalog(std::string_view json_bytes) {
  json doc;
  try {
    doc = json::parse(json_bytes.begin(), json_bytes.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("catalog JSON parse error at byte ") + std::to_string(e.byte) + ": " + e.what(),
                     e.byte);
  }
  if (!doc.is_object()) invalid("catalog root must be an object");

  Catalog catalog;
  if (const auto v = doc.find("version"); v != doc.end()) {
    if (!v->is_string()) invalid("'version' must be a string");
    catalog.set_source_version(v->get<std::string>());
  }

  const auto cats = doc.find("categories");
  if (cats == doc.end() || !cats->is_object()) invalid("catalog must contain a 'categories' object");

  for (const auto& [category, entries] : cats->items()) {
    if (!is_registered_category(category)) invalid("unknown category id '" + category + "'");
    if (!entries.is_array()) invalid("category '" + category + "' must be an array");
    for (const auto& raw : entries) {
      if (!raw.is_object()) invalid("category '" + category + "' contains a non-object entry");
      MetricEntry entry;
      entry.name = require_string(raw, "name", "metric in '" + category + "'");
      const auto type_text = require_string(raw, "type", entry.name);
      const auto type = parse_metric_type(type_text);
      if (!type) invalid(entry.name + ": unknown metric type '" + type_text + "'");
      entry.type = *type;
      const auto pri_text = require_string(raw, "priority", entry.name);
      const auto pri = parse_priority(pri_text);
      if (!pri) invalid(entry.name + ": unknown priority '" + pri_text + "'");
      entry.priority = *pri;
      if (const auto h = raw.find("help"); h != raw.end()) {
        if (!h->is_string()) invalid(entry.name + ": 'help' must be a string");
        entry.help = h->get<std::string>();
      }
      if (const auto k = raw.find("keywords"); k != raw.end()) entry.keywords = normalize_keywords(*k, entry.name);
      entry.category = category;

      const std::string name = entry.name;
      if (!catalog.insert(std::move(entry))) invalid("duplicate metric name '" + name + "'");
    }
  }
  catalog.set_loaded_at(std::chrono::system_clock::now());
  return catalog;
}

std::string dump_catalog(const Catalog& catalog, int indent) {
  json cats = json::object();
  for (const auto& [category, entries] : catalog.categories()) {
    json arr = json::array();
    for (const auto& e : entries) {
      arr.push_back({{"name", e.name},
                     {"type", to_string(e.type)},
                     {"help", e.help},
                     {"priority", to_string(e.priority)},
                     {"keywords", e.keywords}});
    }
    cats[category] = std::move(arr);
  }
  const json doc = {{"version", catalog.source_version()}, {"categories", std::move(cats)}};
  return doc.dump(indent);
}

// ---- queries ---------------------------------------------------------------

std::optional<CategoryPriority> lookup_metric(const Catalog& catalog, std::string_view name) {
  const auto& flat = catalog.flat_lookup();
  const auto it = flat.find(std::string(name));
  if (it == flat.end()) return std::nullopt;
  return it->second;
}

std::vector<MetricEntry> metrics_in_categories(const Catalog& catalog, const std::set<std::string>& categories,
                                               bool include_medium) {
  for (const auto& c : categories) {
    if (!is_registered_category(c)) throw Error(ErrorKind::Input, "unknown category id '" + c + "'");
  }
  std::vector<MetricEntry> out;
  const auto& all = catalog.categories();
  if (categories.empty()) {
    for (const auto& [category, entries] : all) {
      for (const auto& e : entries) {
        if (e.priority == Priority::High) out.push_back(e);
      }
    }
    return out;
  }
  for (const auto& c : categories) {
    const auto it = all.find(c);
    if (it == all.end()) continue;
    for (const auto& e : it->second) {
      if (include_medium || e.priority == Priority::High) out.push_back(e);
    }
  }
  return out;
}

CatalogStats catalog_stats(const Catalog& catalog) {
  CatalogStats stats;
  for (const auto& [category, entries] : catalog.categories()) {
    stats.per_category[category] = entries.size();
    stats.total += entries.size();
    for (const auto& e : entries) {
      (e.priority == Priority::High ? stats.high : stats.medium) += 1;
    }
  }
  return stats;
}

// ---- families --------------------------------------------------------------

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string_view strip(std::string_view s, std::string_view suffix) { return s.substr(0, s.size() - suffix.size()); }

}  // namespace

std::vector<MetricFamily> collapse_metric_families(std::span<const std::string> names) {
  const std::unordered_set<std::string_view> present(names.begin(), names.end());
  auto has = [&](std::string_view base, std::string_view suffix) {
    return present.count(std::string(base) + std::string(suffix)) != 0;
  };

  std::map<std::string, MetricType> families;
  for (const std::string& name : names) {
    if (ends_with(name, "_bucket")) {
      families[std::string(strip(name, "_bucket"))] = MetricType::Histogram;
      continue;
    }
    bool child = false;
    for (std::string_view suffix : {"_sum", "_count"}) {
      if (!ends_with(name, suffix)) continue;
      const auto base = strip(name, suffix);
      if (has(base, "_bucket")) {
        families[std::string(base)] = MetricType::Histogram;
        child = true;
      } else if (present.count(base) != 0) {
        families[std::string(base)] = MetricType::Summary;
        child = true;
      }
    }
    if (child) continue;
    if (families.count(name) != 0) continue;

    MetricType type = MetricType::Gauge;
    if (has(name, "_bucket")) {
      type = MetricType::Histogram;
    } else if (has(name, "_sum") && has(name, "_count")) {
      type = MetricType::Summary;
    } else if (ends_with(name, "_total") || ends_with(name, "_count") || ends_with(name, "_sum")) {
      type = MetricType::Counter;
    }
    families[name] = type;
  }

  std::vector<MetricFamily> out;
  out.reserve(families.size());
  for (auto& [name, type] : families) out.push_back({name, type});
  return out;
}

std::vector<std::string> exposed_series_names(const MetricEntry& entry) {
  switch (entry.type) {
    case MetricType::Histogram:
      return {entry.name + "_bucket", entry.name + "_sum", entry.name + "_count", entry.name};
    case MetricType::Summary:
      return {entry.name, entry.name + "_sum", entry.name + "_count"};
    default:
      return {entry.name};
  }
}

// ---- CatalogStore ----------------------------------------------------------

CatalogStore::CatalogStore(Catalog initial) : current_(std::make_shared<const Catalog>(std::move(initial))) {}

std::shared_ptr<const Catalog> CatalogStore::snapshot() const {
  std::lock_guard lock(swap_mutex_);
  return current_;
}

std::uint64_t CatalogStore::generation() const {
  std::lock_guard lock(swap_mutex_);
  return generation_;
}

void CatalogStore::replace(Catalog catalog) {
  std::lock_guard writer(writer_mutex_);
  publish(std::make_shared<const Catalog>(std::move(catalog)));
}

void CatalogStore::publish(std::shared_ptr<const Catalog> next) {
  std::lock_guard lock(swap_mutex_);
  current_ = std::move(next);
  ++generation_;
}

}  // namespace promnl
