// SPDX-License-Identifier: Apache-2.0
#include "promnl/config.hpp"

#include <array>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "promnl/embedded_data.hpp"
#include "promnl/errors.hpp"
#include "promnl/text.hpp"

namespace promnl {

using nlohmann::json;

namespace {

struct Sources {
  std::string keyword_rules{embedded::keyword_rules()};
  std::string gpu_curated{embedded::gpu_curated_keywords()};
  std::string priority_patterns{embedded::gpu_priority_patterns()};
  std::string vendor_prefixes{embedded::gpu_vendor_prefixes()};
  std::string lexicon{embedded::intent_lexicon()};
  std::string scoring{embedded::scoring()};
  std::string category_keywords{embedded::category_keywords()};
  std::string temporal{embedded::temporal()};
};

CategoryKeywords parse_category_keywords(const json& doc) {
  CategoryKeywords out;
  for (const auto& [category, list] : doc.items()) {
    if (!is_registered_category(category)) {
      throw Error(ErrorKind::Config, "category_keywords: unknown category '" + category + "'");
    }
    auto& dest = out[category];
    for (const auto& k : list) dest.push_back(text::to_lower(k.get<std::string>()));
  }
  return out;
}

Config build(const Sources& s) {
  Config cfg;
  try {
    cfg.keyword_rules = KeywordRules::from_json(parse_config_json(s.keyword_rules, "keyword_rules.json"));
    cfg.keyword_rules.merge_curated(parse_config_json(s.gpu_curated, "gpu_curated_keywords.json"));
    cfg.priority_patterns = PriorityPatterns::from_json(parse_config_json(s.priority_patterns, "gpu_priority_patterns.json"));
    cfg.vendor_prefixes = VendorPrefixConfig::from_json(parse_config_json(s.vendor_prefixes, "gpu_vendor_prefixes.json"));
    cfg.lexicon = IntentLexicon::from_json(parse_config_json(s.lexicon, "intent_lexicon.json"));
    cfg.scoring = ScoringConfig::from_json(parse_config_json(s.scoring, "scoring.json"));
    cfg.category_keywords = parse_category_keywords(parse_config_json(s.category_keywords, "category_keywords.json"));
    cfg.temporal = TemporalConfig::from_json(parse_config_json(s.temporal, "temporal.json"));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("config: ") + e.what());
  }
  return cfg;
}

}  // namespace

json parse_config_json(std::string_view bytes, const std::string& what) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, what + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Input, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Config Config::defaults() { return build(Sources{}); }

Config Config::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorKind::Config, "config directory not found: " + dir.string());
  Sources s;
  const std::array<std::pair<const char*, std::string*>, 8> files{{
      {"keyword_rules.json", &s.keyword_rules},
      {"gpu_curated_keywords.json", &s.gpu_curated},
      {"gpu_priority_patterns.json", &s.priority_patterns},
      {"gpu_vendor_prefixes.json", &s.vendor_prefixes},
      {"intent_lexicon.json", &s.lexicon},
      {"scoring.json", &s.scoring},
      {"category_keywords.json", &s.category_keywords},
      {"temporal.json", &s.temporal},
  }};
  for (const auto& [name, dest] : files) {
    const auto path = dir / name;
    if (std::filesystem::exists(path)) *dest = read_file(path);
  }
  return build(s);
}

void Config::apply_environment() {
  if (const char* prefixes = std::getenv("GPU_METRIC_PREFIXES"); prefixes != nullptr) {
    vendor_prefixes.add_custom(prefixes);
  }
  if (const char* window = std::getenv("DEFAULT_TIME_WINDOW"); window != nullptr && *window != '\0') {
    temporal.default_window = parse_duration(window);
  }
}

Catalog prepare_catalog(std::string_view json_bytes, const Config& config) {
  auto catalog = load_catalog(json_bytes);
  catalog.set_category_keywords(config.category_keywords);
  fill_missing_keywords(catalog, config.keyword_rules);
  return catalog;
}

Catalog gpu_fixture_catalog(const Config& config) { return prepare_catalog(embedded::gpu_fixture_catalog(), config); }

namespace {

struct CategoryPlan {
  std::string_view category;
  std::vector<std::string_view> prefixes;
  std::vector<std::string_view> subsystems;
};

// Distinct prefixes keep the longest-prefix categorizer unambiguous.
const std::vector<CategoryPlan>& plans() {
  static const std::vector<CategoryPlan> kPlans{
      {"api_server", {"apiserver_"}, {"request", "response", "watch", "admission", "storage", "flowcontrol", "audit"}},
      {"autoscaling", {"autoscaler_"}, {"scale", "hpa", "target", "replica", "recommendation", "evaluation"}},
      {"cluster_health", {"kube_deployment_", "kube_statefulset_", "kube_daemonset_", "kube_job_"}, {"status", "spec", "metadata", "condition", "replicas", "created"}},
      {"container_runtime", {"containerd_", "crio_"}, {"image", "sandbox", "snapshot", "runtime", "operations", "task"}},
      {"controller_manager", {"workqueue_", "controller_"}, {"queue", "work", "reconcile", "retries", "sync", "informer"}},
      {"coredns", {"coredns_"}, {"dns", "forward", "cache", "plugin", "panic", "reload"}},
      {"etcd", {"etcd_"}, {"disk", "server", "network", "mvcc", "debugging", "snap"}},
      {"kube_proxy", {"kubeproxy_"}, {"sync", "proxy", "rules", "iptables", "ipvs", "endpoint"}},
      {"kubelet", {"kubelet_"}, {"pleg", "runtime", "pod", "volume", "eviction", "cgroup"}},
      {"networking", {"cilium_", "ovn_"}, {"drop", "forward", "policy", "endpoint", "datapath", "bpf"}},
      {"node_hardware", {"node_"}, {"disk", "filesystem", "hwmon", "vmstat", "pressure", "thermal", "power"}},
      {"observability", {"prometheus_", "alertmanager_"}, {"tsdb", "rule", "notifications", "scrape", "remote", "engine"}},
      {"pod_container", {"kube_pod_", "container_"}, {"fs", "network", "spec", "status", "oom", "start"}},
      {"scheduler", {"scheduler_"}, {"queue", "schedule", "framework", "plugin", "preemption", "binding"}},
      {"security", {"certmanager_", "gatekeeper_"}, {"certificate", "violation", "audit", "webhook", "issuer", "policy"}},
      {"storage", {"csi_", "storage_"}, {"volume", "attach", "provision", "snapshot", "operation", "capacity"}},
  };
  return kPlans;
}

constexpr std::array<std::string_view, 16> kNouns{
    "requests", "operations", "errors", "latency", "bytes", "objects", "events", "retries",
    "failures", "items",    "entries",    "calls",  "updates", "size",  "depth",  "attempts"};

}  // namespace

Catalog synthetic_catalog(const Config& config, const SyntheticSpec& spec) {
  const auto fixture = gpu_fixture_catalog(config);
  const auto& fixture_cats = fixture.categories();

  Catalog catalog;
  catalog.set_source_version("synthetic-" + std::to_string(spec.total));
  catalog.set_category_keywords(config.category_keywords);

  std::size_t fixture_total = 0;
  std::size_t fixture_high = 0;
  for (const auto& [category, entries] : fixture_cats) {
    for (const auto& e : entries) {
      catalog.insert(e);
      ++fixture_total;
      if (e.priority == Priority::High) ++fixture_high;
    }
  }
  if (spec.total < fixture_total || spec.high_total < fixture_high) {
    throw Error(ErrorKind::Input, "synthetic catalog smaller than the GPU fixture");
  }

  const auto& plan_list = plans();
  const std::size_t n = plan_list.size();
  const std::size_t to_add = spec.total - fixture_total;
  const std::size_t high_to_add = spec.high_total - fixture_high;

  std::mt19937_64 rng(spec.seed);
  auto pick = [&rng](std::size_t bound) { return static_cast<std::size_t>(rng() % bound); };

  for (std::size_t ci = 0; ci < n; ++ci) {
    const auto& plan = plan_list[ci];
    std::size_t quota = to_add / n + (ci < to_add % n ? 1 : 0);
    std::size_t high_quota = high_to_add / n + (ci < high_to_add % n ? 1 : 0);
    high_quota = std::min(high_quota, quota);

    std::size_t made = 0;
    std::size_t attempts = 0;
    while (made < quota) {
      if (++attempts > quota * 200) throw Error(ErrorKind::Input, "synthetic catalog: name space exhausted");
      const auto prefix = plan.prefixes[pick(plan.prefixes.size())];
      const auto subsystem = plan.subsystems[pick(plan.subsystems.size())];
      const auto noun = kNouns[pick(kNouns.size())];
      const auto type_roll = pick(10);
      MetricEntry e;
      e.type = type_roll < 4 ? MetricType::Counter
             : type_roll < 8 ? MetricType::Gauge
             : type_roll < 9 ? MetricType::Histogram
                             : MetricType::Summary;
      std::string name = std::string(prefix) + std::string(subsystem) + "_" + std::string(noun);
      if (pick(3) == 0) name += "_" + std::to_string(pick(4));
      switch (e.type) {
        case MetricType::Counter: name += "_total"; break;
        case MetricType::Histogram:
        case MetricType::Summary: name += "_seconds"; break;
        case MetricType::Gauge: break;
      }
      if (catalog.contains(name)) continue;
      e.name = std::move(name);
      e.category = std::string(plan.category);
      e.help = std::string(subsystem) + " " + std::string(noun) + " reported by " + std::string(plan.category);
      e.priority = made < high_quota ? Priority::High : Priority::Medium;
      e.keywords = generate_keywords(e.name, e.type, e.help, config.keyword_rules);
      catalog.insert(std::move(e));
      ++made;
    }
  }
  catalog.set_loaded_at(std::chrono::system_clock::now());
  return catalog;
}

}  // namespace promnl
